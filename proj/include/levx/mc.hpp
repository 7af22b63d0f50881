#pragma once

#include <cstdint>
#include <vector>

#include "levx/levy.hpp"
#include "levx/whf.hpp"

namespace levx {

struct SimConfig {
    std::size_t paths = 100000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    double horizon = 1e6;          // hard cap on simulated time per path
    bool bridge_correction = false;  // Brownian-bridge extrema between grid points
    unsigned threads = 0;            // 0 = hardware concurrency

    void validate() const;
};

struct ExtremaSample {
    double supremum;
    double infimum;
};

// Path extrema (M, I) at the stopping time.  Exact-increment families only
// (BrownianDrift, CompoundPoissonMixedGamma); deterministic for a fixed seed,
// independent of thread count (per-path counter-based seeding).
std::vector<ExtremaSample> simulate_extrema(const LevyModel& model, const StoppingTime& stop,
                                            const SimConfig& cfg);

// Kolmogorov-Smirnov distance between one-sided samples and the closed-form
// law (atom + mixture CDF).  Samples must live on the density's support side.
double ks_distance(const std::vector<double>& samples, const ExtremaDensity& density);

}  // namespace levx
