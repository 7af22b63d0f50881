#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levx/rational.hpp"
#include "levx/ruin.hpp"
#include "levx/whf.hpp"

namespace levx {

// Options for the poles -> fit -> split -> densities pipeline.
struct PipelineOptions {
    std::size_t pole_count = 4;
    RationalClass cls = RationalClass::D;
    double grid_halfwidth = 64.0;
    std::size_t grid_points = std::size_t{1} << 15;
    double norm_order = 2.0;
    SearchRegion region;
    // pins the fitted coefficients instead of solving the least-squares
    // problem; order matches the basis (upper-half-plane poles by increasing
    // modulus, then lower).  Used to reproduce the reference cases whose
    // coefficients were chosen by eye.
    std::optional<std::vector<double>> coefficient_override;
};

struct PipelineResult {
    PoleSet poles;
    RationalApproximant approximant;
    double a0 = 0.0;
    double fit_err = 0.0;
    double bound_value = 0.0;
    HalfPlaneFactor factor_plus;
    HalfPlaneFactor factor_minus;
    double rescale_plus = 1.0;
    double rescale_minus = 1.0;
    ExtremaDensity supremum;
    ExtremaDensity infimum;
    std::vector<std::string> warnings;
};

PipelineResult run_pipeline(const LevyModel& model, const StoppingTime& stop,
                            const PipelineOptions& options);

}  // namespace levx
