#include <doctest.h>

#include <cmath>

#include "levx/mc.hpp"
#include "levx/pipeline.hpp"

using namespace levx;

TEST_CASE("constant path gives zero extrema") {
    SimConfig cfg;
    cfg.paths = 64;
    cfg.dt = 0.01;
    cfg.seed = 7;
    const auto samples =
        simulate_extrema(BrownianDrift{0.0, 0.0}, StoppingTime::exponential(1.0), cfg);
    for (const auto& s : samples) {
        CHECK(s.supremum == 0.0);
        CHECK(s.infimum == 0.0);
    }
}

TEST_CASE("every sample satisfies I <= 0 <= M") {
    SimConfig cfg;
    cfg.paths = 2000;
    cfg.dt = 0.01;
    cfg.seed = 11;
    MixedGammaJumps jumps;
    jumps.positive = {{0.7, 1, 1.0}};
    jumps.negative = {{0.3, 1, 2.0}};
    const LevyModel models[] = {BrownianDrift{0.4, 1.0},
                                CompoundPoissonMixedGamma{-0.2, 0.3, 2.0, jumps}};
    for (const auto& model : models) {
        for (const auto& stop :
             {StoppingTime::exponential(1.0), StoppingTime::geometric(0.5)}) {
            const auto samples = simulate_extrema(model, stop, cfg);
            for (const auto& s : samples) {
                CHECK(s.supremum >= 0.0);
                CHECK(s.infimum <= 0.0);
            }
        }
    }
}

TEST_CASE("fixed seed reproduces samples regardless of thread count") {
    SimConfig cfg;
    cfg.paths = 512;
    cfg.dt = 0.01;
    cfg.seed = 123;
    cfg.threads = 1;
    const auto a = simulate_extrema(BrownianDrift{0.1, 1.0}, StoppingTime::exponential(2.0), cfg);
    cfg.threads = 8;
    const auto b = simulate_extrema(BrownianDrift{0.1, 1.0}, StoppingTime::exponential(2.0), cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].supremum == b[k].supremum);
        CHECK(a[k].infimum == b[k].infimum);
    }
}

TEST_CASE("unsupported families are rejected") {
    SimConfig cfg;
    cfg.paths = 8;
    CHECK_THROWS_AS(
        simulate_extrema(CosechSquaredJumps{2.0, 2.0, 0.0}, StoppingTime::exponential(1.0), cfg),
        DomainError);
    CHECK_THROWS_AS(simulate_extrema(GeneralizedHyperbolic{-1.0, 2.0, 1.0, 3.0, 2.0},
                                     StoppingTime::exponential(1.0), cfg),
                    DomainError);
}

TEST_CASE("Brownian supremum law matches e^{-x} (KS, bridge-corrected)") {
    // mu=0, sigma=sqrt(2), q=1: M ~ Exp(1)
    SimConfig cfg;
    cfg.paths = 20000;
    cfg.dt = 1e-3;
    cfg.seed = 20240811;
    cfg.bridge_correction = true;
    const auto samples =
        simulate_extrema(BrownianDrift{0.0, std::sqrt(2.0)}, StoppingTime::exponential(1.0), cfg);
    std::vector<double> sup;
    sup.reserve(samples.size());
    for (const auto& s : samples) sup.push_back(s.supremum);

    ExtremaDensity law;
    law.side = ExtremumSide::Supremum;
    law.terms = {{1.0, 1.0, 0, 0.0, 0.0}};
    CHECK(ks_distance(sup, law) < 0.02);
}

TEST_CASE("inverse-CDF samples from the law pass the KS check") {
    // exponential mixture sampled exactly through its CDF
    ExtremaDensity law;
    law.side = ExtremumSide::Supremum;
    law.terms = {{0.5 * 2.0, 2.0, 0, 0.0, 0.0}, {0.5 * 0.7, 0.7, 0, 0.0, 0.0}};
    // mixture of Exp(2) and Exp(0.7) with equal weights
    std::vector<double> samples;
    unsigned long long state = 42;
    auto uniform = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return (static_cast<double>(state >> 11) + 0.5) * 0x1.0p-53;
    };
    for (int k = 0; k < 100000; ++k) {
        const double rate = (uniform() < 0.5) ? 2.0 : 0.7;
        samples.push_back(-std::log(uniform()) / rate);
    }
    CHECK(ks_distance(samples, law) < 0.01);
}

TEST_CASE("ks_distance edge cases") {
    ExtremaDensity law;
    law.side = ExtremumSide::Supremum;
    law.atom = 1.0;
    CHECK_THROWS_AS(ks_distance({}, law), DomainError);
    CHECK(ks_distance(std::vector<double>(100, 0.0), law) == 0.0);
    CHECK_THROWS_AS(ks_distance({-1.0}, law), DomainError);
}

TEST_CASE("geometric stopping: atom mass at zero is 1-q") {
    // tau = 0 with probability 1-q leaves the path untouched
    SimConfig cfg;
    cfg.paths = 40000;
    cfg.seed = 5;
    const double q = 0.4;
    const auto samples =
        simulate_extrema(BrownianDrift{0.0, 1.0}, StoppingTime::geometric(q), cfg);
    std::size_t at_zero = 0;
    for (const auto& s : samples) {
        if (s.supremum == 0.0 && s.infimum == 0.0) ++at_zero;
    }
    const double frac = static_cast<double>(at_zero) / static_cast<double>(samples.size());
    CHECK(frac == doctest::Approx(1.0 - q).epsilon(0.03));
}

TEST_CASE("geometric stopping: pipeline law against the simulated walk") {
    // the embedded unit-time walk's extrema; a 2-pole rational fit is only an
    // approximation here, so this is a cross-validation at smoke tolerance
    const LevyModel model = BrownianDrift{0.2, 1.0};
    const StoppingTime stop = StoppingTime::geometric(0.5);
    PipelineOptions opts;
    opts.pole_count = 2;
    opts.grid_points = 1 << 13;
    opts.region.im_min = -10.0;
    opts.region.im_max = 10.0;
    opts.region.re_max = 6.0;
    const PipelineResult res = run_pipeline(model, stop, opts);

    SimConfig cfg;
    cfg.paths = 30000;
    cfg.seed = 321;
    const auto samples = simulate_extrema(model, stop, cfg);
    std::vector<double> sup;
    std::size_t at_zero = 0;
    for (const auto& s : samples) {
        sup.push_back(s.supremum);
        if (s.supremum == 0.0) ++at_zero;
    }
    const double frac0 = static_cast<double>(at_zero) / static_cast<double>(samples.size());
    // the fitted atom tracks the simulated point mass at zero
    CHECK(std::abs(res.supremum.atom - frac0) < 0.05);
    CHECK(ks_distance(sup, res.supremum) < 0.1);
}

TEST_CASE("compound Poisson: exact rational CF reproduces the simulated law") {
    MixedGammaJumps jumps;
    jumps.positive = {{0.7, 1, 2.0}};
    jumps.negative = {{0.3, 1, 1.5}};
    const LevyModel model = CompoundPoissonMixedGamma{0.0, 0.0, 2.0, jumps};
    const StoppingTime stop = StoppingTime::exponential(1.0);
    PipelineOptions opts;
    opts.pole_count = 3;
    opts.grid_points = 1 << 13;
    opts.region.im_min = -8.0;
    opts.region.im_max = 8.0;
    opts.region.re_max = 6.0;
    const PipelineResult res = run_pipeline(model, stop, opts);
    CHECK(res.fit_err < 1e-6);  // h is itself rational here

    SimConfig cfg;
    cfg.paths = 30000;
    cfg.seed = 777;
    const auto samples = simulate_extrema(model, stop, cfg);
    std::vector<double> sup, inf;
    for (const auto& s : samples) {
        sup.push_back(s.supremum);
        inf.push_back(s.infimum);
    }
    CHECK(ks_distance(sup, res.supremum) < 0.03);
    CHECK(ks_distance(inf, res.infimum) < 0.03);
}

TEST_CASE("halving dt does not move the Brownian KS beyond sampling noise") {
    SimConfig cfg;
    cfg.paths = 8000;
    cfg.dt = 2e-3;
    cfg.seed = 99;
    cfg.bridge_correction = true;
    ExtremaDensity law;
    law.side = ExtremumSide::Supremum;
    law.terms = {{1.0, 1.0, 0, 0.0, 0.0}};

    auto run = [&](double dt) {
        SimConfig c = cfg;
        c.dt = dt;
        const auto samples = simulate_extrema(BrownianDrift{0.0, std::sqrt(2.0)},
                                              StoppingTime::exponential(1.0), c);
        std::vector<double> sup;
        for (const auto& s : samples) sup.push_back(s.supremum);
        return ks_distance(sup, law);
    };
    const double ks_coarse = run(2e-3);
    const double ks_fine = run(1e-3);
    const double noise = 1.0 / std::sqrt(static_cast<double>(cfg.paths));
    CHECK(std::abs(ks_coarse - ks_fine) < 2.0 * noise);
}
