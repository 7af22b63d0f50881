#include <doctest.h>

#include <cmath>
#include <random>

#include "levx/levy.hpp"

using namespace levx;

namespace {

std::vector<LevyModel> cf_family_models() {
    MixedGammaJumps jumps;
    jumps.positive = {{0.6, 1, 2.0}, {0.1, 2, 3.0}};
    jumps.negative = {{0.3, 1, 1.5}};
    return {
        BrownianDrift{0.3, 1.2},
        CompoundPoissonMixedGamma{0.1, 0.5, 2.0, jumps},
        CosechSquaredJumps{2.0, 2.0, 0.0},
        CosechSquaredJumps{1.0, 0.7, 0.25},
    };
}

}  // namespace

TEST_CASE("psi closed-form anchors") {
    // Brownian: i mu w - sigma^2 w^2 / 2
    BrownianDrift bm{0.0, std::sqrt(2.0)};
    CHECK(psi(bm, Complex(1.0, 0.0)).real() == doctest::Approx(-1.0));
    CHECK(std::abs(psi(bm, Complex(1.0, 0.0)).imag()) < 1e-15);

    // cosech^2 with sigma=mu=2, tilt=0: psi(w) = -2w^2 + 2iw - 4 pi w coth(pi w) + 4
    CosechSquaredJumps cs{2.0, 2.0, 0.0};
    CHECK(std::abs(psi(cs, Complex(0.0))) == 0.0);
    const Complex at1 = psi(cs, Complex(1.0, 0.0));
    const double coth_pi = std::cosh(std::numbers::pi) / std::sinh(std::numbers::pi);
    CHECK(at1.real() == doctest::Approx(-2.0 + 4.0 - 4.0 * std::numbers::pi * coth_pi));
    CHECK(at1.imag() == doctest::Approx(2.0));

    // GH at 0
    GeneralizedHyperbolic gh{-1.0, 2.0, 1.0, 3.0, 2.0};
    CHECK(std::abs(psi(gh, Complex(0.0))) == 0.0);
}

TEST_CASE("GH characteristic function against frozen references") {
    GeneralizedHyperbolic gh{-1.0, 2.0, 1.0, 3.0, 2.0};
    const Complex p1 = gh_char_function(gh, Complex(0.5, 0.0));
    CHECK(p1.real() == doctest::Approx(-0.14423495112226297).epsilon(1e-12));
    CHECK(p1.imag() == doctest::Approx(0.7674504752881033).epsilon(1e-12));

    const Complex p2 = gh_char_function(gh, Complex(1.0, 0.5));
    CHECK(p2.real() == doctest::Approx(-0.090374353306994091).epsilon(1e-10));
    CHECK(p2.imag() == doctest::Approx(0.049821997798878565).epsilon(1e-10));

    // dual-sign exponent, continuous branch: psi(0.5) = -log phi(0.5)
    const Complex ps = psi(gh, Complex(0.5, 0.0));
    CHECK(ps.real() == doctest::Approx(0.24732527986073003).epsilon(1e-10));
    CHECK(ps.imag() == doctest::Approx(-1.7565696881347577).epsilon(1e-10));
}

TEST_CASE("psi(0) = 0 and Hermitian symmetry across families") {
    for (const auto& model : cf_family_models()) {
        CHECK(std::abs(psi(model, Complex(0.0))) == 0.0);
        for (double w : {0.31, 1.7, 5.3, 22.0}) {
            const Complex a = psi(model, Complex(w, 0.0));
            const Complex b = psi(model, Complex(-w, 0.0));
            CHECK(std::abs(b - std::conj(a)) < 1e-10 * (1.0 + std::abs(a)));
        }
    }
    // GH keeps the symmetry under its dual sign convention
    GeneralizedHyperbolic gh{-1.0, 2.0, 1.0, 3.0, 2.0};
    for (double w : {0.4, 1.9}) {
        const Complex a = psi(gh, Complex(w, 0.0));
        const Complex b = psi(gh, Complex(-w, 0.0));
        CHECK(std::abs(b - std::conj(a)) < 1e-9 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("stopped CF anchors and bounds") {
    BrownianDrift bm{0.0, std::sqrt(2.0)};
    const StoppingTime stop = StoppingTime::exponential(1.0);
    for (double w : {0.0, 0.7, 2.4}) {
        const Complex h = stopped_cf(bm, stop, Complex(w, 0.0));
        CHECK(std::abs(h - 1.0 / (1.0 + w * w)) < 1e-14);
    }
    for (const auto& model : cf_family_models()) {
        CHECK(stopped_cf(model, stop, Complex(0.0)) == Complex(1.0));
        const StoppingTime geom = StoppingTime::geometric(0.4);
        CHECK(stopped_cf(model, geom, Complex(0.0)) == Complex(1.0));
    }
}

TEST_CASE("|h| <= 1 on a dense real sweep") {
    // true CF families only: the GH family's dual-sign exponent is a formal
    // object matching the factorization example, not a characteristic function
    const StoppingTime stop = StoppingTime::exponential(2.5);
    const StoppingTime geom = StoppingTime::geometric(0.35);
    auto models = cf_family_models();
    for (const auto& model : models) {
        GridFunction grid = GridFunction::uniform(-50.0, 50.0, 1 << 13);
        const GridFunction h_exp = sample_stopped_cf(model, stop, grid);
        const GridFunction h_geo = sample_stopped_cf(model, geom, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(h_exp.value(k)) <= 1.0 + 1e-12);
            CHECK(std::abs(h_geo.value(k)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("positive-definiteness spot check (Gram matrices)") {
    // 6 random points; smallest eigenvalue of the Hermitian Gram matrix of
    // h(w_i - w_j) must be nonnegative for true CF families.
    const StoppingTime stop = StoppingTime::exponential(1.5);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-6.0, 6.0);
    for (const auto& model : cf_family_models()) {
        double pts[6];
        for (auto& p : pts) p = unif(rng);
        Complex gram[6][6];
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                gram[i][j] = stopped_cf(model, stop, Complex(pts[i] - pts[j], 0.0));
            }
        }
        // power iteration on (max_eig I - G) to bound the smallest eigenvalue
        // cheap Gershgorin lower bound first; if inconclusive, do a Jacobi sweep
        // via the characteristic polynomial is overkill: use inverse-power-free
        // estimate: min eigenvalue >= min_i (G_ii - sum_{j != i} |G_ij|) can be
        // loose, so fall back to checking x^H G x >= -1e-8 on random vectors.
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            Complex x[6];
            double norm2 = 0.0;
            for (auto& xv : x) {
                xv = Complex(gauss(rng), gauss(rng));
                norm2 += std::norm(xv);
            }
            Complex quad(0.0);
            for (int i = 0; i < 6; ++i) {
                for (int j = 0; j < 6; ++j) quad += std::conj(x[i]) * gram[i][j] * x[j];
            }
            CHECK(quad.real() / norm2 > -1e-8);
        }
    }
}

TEST_CASE("GH exponent: pointwise march agrees with grid unwrapping") {
    // psi(model, w) unwraps the log along a ray from 0; sample_stopped_cf
    // unwraps node-to-node along the grid. Both must land on the same branch.
    GeneralizedHyperbolic gh{-1.0, 2.0, 1.0, 3.0, 2.0};
    const StoppingTime stop = StoppingTime::exponential(5.0);
    GridFunction grid = GridFunction::uniform(-48.0, 48.0, 1 << 10);
    const GridFunction h = sample_stopped_cf(gh, stop, grid);
    for (const std::size_t k : {std::size_t{7}, grid.size() / 3, grid.size() - 5}) {
        const Complex direct = stopped_cf(gh, stop, Complex(grid.node(k), 0.0));
        CHECK(std::abs(direct - h.value(k)) < 1e-9 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("mixed gamma density") {
    MixedGammaJumps single;
    single.positive = {{1.0, 1, 2.0}};
    CHECK(mixed_gamma_density(single, 0.0) == doctest::Approx(2.0));
    CHECK(mixed_gamma_density(single, 1.0) == doctest::Approx(2.0 * std::exp(-2.0)));
    CHECK(mixed_gamma_density(single, -0.5) == 0.0);

    MixedGammaJumps symmetric;
    symmetric.positive = {{0.5, 2, 1.3}};
    symmetric.negative = {{0.5, 2, 1.3}};
    for (double x : {0.2, 0.9, 2.4}) {
        CHECK(mixed_gamma_density(symmetric, x) ==
              doctest::Approx(mixed_gamma_density(symmetric, -x)));
    }

    // quadrature of the density over [-50, 50] integrates to the total weight;
    // midpoint rule with 0 on an interval boundary (the density jumps there)
    MixedGammaJumps mixed;
    mixed.positive = {{0.55, 1, 2.0}, {0.15, 3, 4.0}};
    mixed.negative = {{0.30, 2, 1.0}};
    const int n = 200000;
    const double a = -50.0, b = 50.0, h = (b - a) / n;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        acc += mixed_gamma_density(mixed, a + (k + 0.5) * h);
    }
    CHECK(acc * h == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("model and stopping validation") {
    CHECK_THROWS_AS(validate(LevyModel(BrownianDrift{0.0, -1.0})), DomainError);
    CHECK_THROWS_AS(validate(LevyModel(CosechSquaredJumps{0.0, 1.0, 1.5})), DomainError);
    CHECK_THROWS_AS(validate(LevyModel(GeneralizedHyperbolic{0.0, 1.0, 2.0, 1.0, 0.0})),
                    DomainError);
    CHECK_THROWS_AS(StoppingTime::exponential(0.0), DomainError);
    CHECK_THROWS_AS(StoppingTime::geometric(1.0), DomainError);
    CHECK(StoppingTime::exponential(5.0).mean() == doctest::Approx(0.2));
    CHECK(StoppingTime::geometric(0.25).mean() == doctest::Approx(1.0 / 3.0));

    MixedGammaJumps bad;
    bad.positive = {{-1.0, 1, 1.0}};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("symmetric stable uses the reciprocal-form exponent") {
    SymmetricStable st{1.0, 1.5, 1.0};
    const Complex w(2.0, 0.0);
    const Complex expected =
        1.0 / (Complex(0.0, 1.0) * 1.0 * w - std::pow(std::abs(2.0), 1.5));
    CHECK(std::abs(psi(st, w) - expected) < 1e-12);
    CHECK(is_true_cf_family(LevyModel(BrownianDrift{})) == true);
    CHECK(is_true_cf_family(LevyModel(st)) == false);
    CHECK(is_true_cf_family(LevyModel(GeneralizedHyperbolic{})) == false);
}
