#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levx/whf.hpp"

using namespace levx;

namespace {

RationalApproximant cosech_reference_approximant() {
    RationalApproximant r;
    r.a0 = 0.0;
    r.cls = RationalClass::DStar;
    const double c = 1.0 / 4.5;
    r.terms = {
        {BasisTerm{BasisForm::R2, 0.4781, 0.0, 1}, c},
        {BasisTerm{BasisForm::R1, 0.5658, 0.0, 1}, c},
        {BasisTerm{BasisForm::R1, 1.4921, 0.0, 1}, c},
    };
    return r;
}

RationalApproximant cauchy_approximant() {
    // 1/(1+w^2) = (1/2)/(iw+1) + (1/2)/(-iw+1)
    RationalApproximant r;
    r.a0 = 0.0;
    r.terms = {
        {BasisTerm{BasisForm::R1, 1.0, 0.0, 1}, 0.5},
        {BasisTerm{BasisForm::R2, 1.0, 0.0, 1}, 0.5},
    };
    return r;
}

}  // namespace

TEST_CASE("carlemann split of the two-pole Cauchy function") {
    const auto [sup, inf] = carlemann_split(cauchy_approximant());
    // upper factor 1/(1-iw), lower 1/(1+iw)
    for (double w : {0.0, 0.7, -2.2, 5.0}) {
        const Complex x(w, 0.0);
        CHECK(std::abs(sup.eval(x) - 1.0 / (1.0 - Complex(0, 1) * w)) < 1e-12);
        CHECK(std::abs(inf.eval(x) - 1.0 / (1.0 + Complex(0, 1) * w)) < 1e-12);
    }
    CHECK(sup.zeros_s.empty());
    CHECK(inf.zeros_s.empty());
}

TEST_CASE("carlemann split reproduces the cosech reference factorization") {
    const auto [sup, inf] = carlemann_split(cosech_reference_approximant());

    // product reconstructs r pointwise
    const RationalApproximant r = cosech_reference_approximant();
    for (int k = 0; k <= 1000; ++k) {
        const double w = -50.0 + 0.1 * k;
        const Complex prod = sup.eval(Complex(w, 0.0)) * inf.eval(Complex(w, 0.0));
        const Complex rv = r.eval(Complex(w, 0.0));
        CHECK(std::abs(prod - rv) < 1e-8 * std::abs(rv));
    }

    // numerator zeros at s = -0.9560 and s = +1.9123
    REQUIRE(sup.zeros_s.size() == 1);
    REQUIRE(inf.zeros_s.size() == 1);
    CHECK(sup.zeros_s[0].real() == doctest::Approx(1.9123).epsilon(1e-4));
    CHECK(inf.zeros_s[0].real() == doctest::Approx(-0.9560).epsilon(1e-4));

    // f+ value at 0: 1.9123/(sqrt(4.5) * 0.4781)
    const double expected_plus0 = 1.9123 / (std::sqrt(4.5) * 0.4781);
    CHECK(sup.eval(Complex(0.0)).real() == doctest::Approx(expected_plus0).epsilon(1e-3));
}

TEST_CASE("carlemann split rejects an identically zero approximant") {
    RationalApproximant r;
    r.a0 = 0.0;
    r.terms = {};
    CHECK_THROWS_AS(carlemann_split(r), DomainError);
}

TEST_CASE("normalize_factors rescales to 1 at the origin") {
    const auto [sup, inf] = carlemann_split(cosech_reference_approximant());
    const NormalizedFactors norm = normalize_factors(sup, inf);
    CHECK(std::abs(norm.plus.eval(Complex(0.0)) - 1.0) < 1e-12);
    CHECK(std::abs(norm.minus.eval(Complex(0.0)) - 1.0) < 1e-12);

    // rescale constants: f+(0) ~ 1.8856, f-(0) ~ 0.5338, product ~ 1/r(0)
    CHECK(1.0 / norm.rescale_plus == doctest::Approx(1.8856).epsilon(1e-3));
    CHECK(1.0 / norm.rescale_minus == doctest::Approx(0.5338).epsilon(1e-3));
    const double product = norm.rescale_plus * norm.rescale_minus;
    CHECK(1.0 / product == doctest::Approx(1.0066).epsilon(1e-3));

    // already-normalized factors stay put
    const NormalizedFactors again = normalize_factors(norm.plus, norm.minus);
    CHECK(again.rescale_plus == doctest::Approx(1.0));
    CHECK(again.rescale_minus == doctest::Approx(1.0));
}

TEST_CASE("meromorphic product factor") {
    const HalfPlaneFactor f = meromorphic_factor({2.0}, {1.0}, 1, ProductSign::Plus);
    CHECK(std::abs(f.eval(Complex(0.0)) - 1.0) < 1e-15);
    // (1 + iw/2)/(1 + iw) at w = 1
    const Complex expected = (1.0 + Complex(0, 0.5)) / (1.0 + Complex(0, 1.0));
    CHECK(std::abs(f.eval(Complex(1.0, 0.0)) - expected) < 1e-14);

    const HalfPlaneFactor g = meromorphic_factor({2.0}, {1.0}, 1, ProductSign::Minus);
    const double prod_mod2 = std::norm(f.eval(Complex(1.0, 0.0)) * g.eval(Complex(1.0, 0.0)));
    CHECK(std::sqrt(prod_mod2) == doctest::Approx(0.625));

    CHECK_THROWS_AS(meromorphic_factor({2.0}, {1.0}, 0, ProductSign::Plus), DomainError);
    CHECK_THROWS_AS(meromorphic_factor({1.0}, {2.0}, 1, ProductSign::Plus), DomainError);
    CHECK_THROWS_AS(meromorphic_factor({1.0, 1.5}, {0.5, 2.0}, 2, ProductSign::Plus),
                    DomainError);
}

TEST_CASE("density from the unit-rate exponential factor") {
    HalfPlaneFactor f;
    f.side = ExtremumSide::Supremum;
    f.poles_s = {Complex(1.0, 0.0)};
    f.scale = -1.0;  // 1/(1-iw) in s-plane monic form
    const ExtremaDensity d = density_from_factor(f);
    CHECK(d.atom == 0.0);
    REQUIRE(d.terms.size() == 1);
    CHECK(d.terms[0].coef == doctest::Approx(1.0));
    CHECK(d.terms[0].rate == doctest::Approx(1.0));
    CHECK(d.terms[0].degree == 0);
    CHECK(d.eval(0.5) == doctest::Approx(std::exp(-0.5)));
    CHECK(d.eval(-0.5) == 0.0);
    CHECK(d.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("cosech reference densities after normalization") {
    const auto [sup_raw, inf_raw] = carlemann_split(cosech_reference_approximant());
    const NormalizedFactors norm = normalize_factors(sup_raw, inf_raw);

    const ExtremaDensity sup = density_from_factor(norm.plus);
    CHECK(sup.atom == doctest::Approx(0.2500).epsilon(1e-3));
    REQUIRE(sup.terms.size() == 1);
    CHECK(sup.terms[0].coef == doctest::Approx(0.3586).epsilon(1e-3));
    CHECK(sup.terms[0].rate == doctest::Approx(0.4781).epsilon(1e-4));
    CHECK(sup.total_mass() == doctest::Approx(1.0).epsilon(1e-8));

    const ExtremaDensity inf = density_from_factor(norm.minus);
    CHECK(inf.atom == 0.0);
    REQUIRE(inf.terms.size() == 2);
    double c_fast = 0.0, c_slow = 0.0;
    for (const auto& t : inf.terms) {
        if (std::abs(t.rate - 1.4921) < 1e-3) c_fast = t.coef;
        if (std::abs(t.rate - 0.5658) < 1e-3) c_slow = t.coef;
    }
    CHECK(c_fast == doctest::Approx(0.5110841035).epsilon(1e-3));
    CHECK(c_slow == doctest::Approx(0.3719983876).epsilon(1e-3));
    CHECK(inf.total_mass() == doctest::Approx(1.0).epsilon(1e-8));

    // density nonnegative across the support scan
    for (int k = 0; k <= 1000; ++k) {
        const double x = -20.0 * k / 1000.0;
        CHECK(inf.eval(x) >= -1e-10);
        CHECK(sup.eval(-x) >= -1e-10);
    }
}

TEST_CASE("density_from_factor rejects unnormalized factors") {
    auto [sup, inf] = carlemann_split(cosech_reference_approximant());
    CHECK_THROWS_AS(density_from_factor(sup), DomainError);
}

TEST_CASE("repeated poles produce polynomially weighted terms") {
    // (1/(1-iw))^2 has a double pole: density x e^{-x}
    HalfPlaneFactor f;
    f.side = ExtremumSide::Supremum;
    f.poles_s = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
    f.scale = 1.0;  // 1/(s-1)^2 at s=0 gives 1
    const ExtremaDensity d = density_from_factor(f);
    CHECK(d.atom == 0.0);
    REQUIRE(d.terms.size() >= 1);
    double at1 = d.eval(1.0);
    CHECK(at1 == doctest::Approx(1.0 * std::exp(-1.0)).epsilon(1e-10));
    CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("oscillatory factor from an r3-type pair inverts to a real density") {
    // single r3 term: all poles upper, infimum-side density with a cosine part
    RationalApproximant r;
    r.a0 = 0.0;
    r.terms = {{BasisTerm{BasisForm::R3, 2.0, 0.8, 1}, 1.0}};
    const auto [sup, inf] = carlemann_split(r);
    CHECK(sup.poles_s.empty());
    const NormalizedFactors norm = normalize_factors(sup, inf);
    const ExtremaDensity d = density_from_factor(norm.minus);
    CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-8));
    // the transform of a positive-definite function stays nonnegative
    for (int k = 0; k <= 1000; ++k) {
        const double x = -12.0 * k / 1000.0;
        CHECK(d.eval(x) >= -1e-10);
    }
}

TEST_CASE("carlemann split handles a high-degree mixed basis") {
    // 8 distinct pole structures incl. cubic pairs and a squared term:
    // denominator degree 14, numerator degree 13
    RationalApproximant r;
    r.a0 = 0.0;
    r.terms = {
        {BasisTerm{BasisForm::R1, 0.4, 0.0, 1}, 0.31},
        {BasisTerm{BasisForm::R1, 1.7, 0.0, 2}, 0.12},
        {BasisTerm{BasisForm::R2, 0.9, 0.0, 1}, 0.27},
        {BasisTerm{BasisForm::R2, 2.6, 0.0, 2}, 0.08},
        {BasisTerm{BasisForm::R3, 1.1, 0.8, 1}, 0.44},
        {BasisTerm{BasisForm::R4, 0.7, 1.4, 1}, 0.19},
        {BasisTerm{BasisForm::R1, 3.9, 0.0, 1}, 0.05},
        {BasisTerm{BasisForm::R2, 5.2, 0.0, 1}, 0.33},
    };
    r.validate();
    const auto [sup, inf] = carlemann_split(r);
    for (int k = 0; k <= 2000; ++k) {
        const double w = -60.0 + 0.06 * k;
        const Complex rv = r.eval(Complex(w, 0.0));
        const Complex prod = sup.eval(Complex(w, 0.0)) * inf.eval(Complex(w, 0.0));
        CHECK(std::abs(prod - rv) < 1e-8 * std::abs(rv));
    }
    // every denominator root is accounted for (counting multiplicity)
    CHECK(sup.poles_s.size() == 7);  // the r2/r4 structures
    CHECK(inf.poles_s.size() == 7);  // the r1/r3 structures
}

TEST_CASE("factorization error bound arithmetic") {
    CHECK(error_bound_factorization(0.0, NormOrder(2.0)) == 0.0);
    CHECK(error_bound_factorization(0.0872, NormOrder(2.0)) ==
          doctest::Approx(0.5 * 0.0872 * 0.0872 + 1.5 * 0.0872).epsilon(1e-12));
    CHECK(error_bound_factorization(1.0, NormOrder(2.0)) == doctest::Approx(2.0));
    // monotone in delta
    double prev = 0.0;
    for (double d = 0.0; d <= 2.0; d += 0.1) {
        const double b = error_bound_factorization(d, NormOrder(1.5));
        CHECK(b >= prev);
        prev = b;
    }
}

TEST_CASE("compound Poisson error bound arithmetic") {
    CHECK(error_bound_compound_poisson(0.0, StoppingTime::exponential(1.0)) == 0.0);
    const double expected = 1.0 / std::sqrt(8.0 * std::numbers::pi) + 1.5;
    CHECK(error_bound_compound_poisson(1.0, StoppingTime::exponential(1.0)) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(error_bound_compound_poisson(1.0, StoppingTime::geometric(0.5)) ==
          doctest::Approx(1.0 / std::sqrt(8.0 * std::numbers::pi) + 1.5).epsilon(1e-12));
    // geometric bound vanishes as q -> 1
    CHECK(error_bound_compound_poisson(1.0, StoppingTime::geometric(0.999999)) < 1e-5);
}

TEST_CASE("random positive approximants have nonnegative inverse transforms") {
    // closed-form kernels of the basis forms (all nonnegative on their side):
    //   r1^j -> (-x)^{j-1} e^{bx}/(j-1)! on x <= 0,  r2^j mirrored,
    //   r3   -> (1/a^2) e^{bx} (1 - cos(ax)) on x <= 0,  r4 mirrored
    auto term_inverse = [](const BasisTerm& t, double x) -> double {
        auto fact = [](int n) { return n <= 1 ? 1.0 : (n == 2 ? 2.0 : 6.0); };
        switch (t.form) {
            case BasisForm::R1:
                if (x > 0.0) return 0.0;
                return std::pow(-x, t.power - 1) * std::exp(t.rate * x) / fact(t.power - 1);
            case BasisForm::R2:
                if (x < 0.0) return 0.0;
                return std::pow(x, t.power - 1) * std::exp(-t.rate * x) / fact(t.power - 1);
            case BasisForm::R3:
                if (x > 0.0) return 0.0;
                return std::exp(t.rate * x) * (1.0 - std::cos(t.osc * x)) / (t.osc * t.osc);
            case BasisForm::R4:
                if (x < 0.0) return 0.0;
                return std::exp(-t.rate * x) * (1.0 - std::cos(t.osc * x)) / (t.osc * t.osc);
        }
        return 0.0;
    };

    // the kernels really are the inverse transforms of BasisTerm::eval:
    // check int kernel(x) e^{iwx} dx == term.eval(w) by quadrature
    const BasisTerm probes[] = {
        {BasisForm::R1, 0.9, 0.0, 1}, {BasisForm::R1, 1.4, 0.0, 2},
        {BasisForm::R2, 0.6, 0.0, 3}, {BasisForm::R3, 1.1, 0.7, 1},
        {BasisForm::R4, 0.8, 1.9, 1},
    };
    for (const auto& probe : probes) {
        for (double w : {0.0, 0.6, -1.7}) {
            Complex acc(0.0);
            const int n = 200000;
            const double a = -60.0, h = 120.0 / n;
            for (int k = 0; k < n; ++k) {
                const double x = a + (k + 0.5) * h;
                acc += term_inverse(probe, x) * std::exp(Complex(0.0, w * x));
            }
            acc *= h;
            CHECK(std::abs(acc - probe.eval(Complex(w, 0.0))) < 1e-6);
        }
    }

    unsigned state = 2024;
    auto next01 = [&state]() {
        state = state * 1664525u + 1013904223u;
        return static_cast<double>(state) / 4294967296.0;
    };
    for (int trial = 0; trial < 20; ++trial) {
        RationalApproximant r;
        r.a0 = (trial % 3 == 0) ? 0.1 * next01() : 0.0;
        const int n_terms = 1 + static_cast<int>(next01() * 3.0);
        for (int t = 0; t < n_terms; ++t) {
            const double pick = next01();
            BasisTerm term;
            term.rate = 0.3 + 3.0 * next01();
            term.power = 1;
            if (pick < 0.35) {
                term.form = BasisForm::R1;
                term.power = 1 + static_cast<int>(next01() * 2.0);
            } else if (pick < 0.7) {
                term.form = BasisForm::R2;
                term.power = 1 + static_cast<int>(next01() * 2.0);
            } else {
                term.form = (pick < 0.85) ? BasisForm::R3 : BasisForm::R4;
                term.osc = 0.2 + 2.0 * next01();
            }
            r.terms.emplace_back(term, 0.2 + next01());
        }
        r.validate();
        for (int k = 0; k <= 1000; ++k) {
            const double x = -25.0 + 50.0 * k / 1000.0;
            double density = 0.0;
            for (const auto& [term, c] : r.terms) density += c * term_inverse(term, x);
            CHECK(density >= 0.0);
        }
    }
}

TEST_CASE("normalized factors pass the Gram positive-definiteness spot check") {
    const auto [sup_raw, inf_raw] = carlemann_split(cosech_reference_approximant());
    const NormalizedFactors norm = normalize_factors(sup_raw, inf_raw);
    const double pts[6] = {-4.3, -1.7, -0.2, 0.9, 2.8, 5.1};
    for (const auto* f : {&norm.plus, &norm.minus}) {
        Complex gram[6][6];
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                gram[i][j] = f->eval(Complex(pts[i] - pts[j], 0.0));
            }
        }
        // random quadratic forms stay essentially nonnegative
        unsigned state = 99;
        auto next_unit = [&state]() {
            state = state * 1664525u + 1013904223u;
            return (static_cast<double>(state) / 4294967296.0) * 2.0 - 1.0;
        };
        for (int trial = 0; trial < 200; ++trial) {
            Complex x[6];
            double norm2 = 0.0;
            for (auto& xv : x) {
                xv = Complex(next_unit(), next_unit());
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
