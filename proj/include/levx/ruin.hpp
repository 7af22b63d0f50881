#pragma once

#include <string>
#include <vector>

#include "levx/whf.hpp"

namespace levx {

struct RuinCurve {
    std::vector<double> reserves;
    std::vector<double> probabilities;
    StoppingTime stopping;
    std::string provenance;
};

// Finite-time ruin probability R^{(q)}(u) = P(I_q < -u), closed form from the
// infimum density's exponential-mixture tail.
double finite_time_ruin(const ExtremaDensity& infimum_density, double u);

RuinCurve ruin_curve(const ExtremaDensity& infimum_density, const std::vector<double>& reserves,
                     const StoppingTime& stopping, const std::string& provenance = "");

struct InfiniteTimeRuin {
    std::vector<double> q_values;
    std::vector<double> ruin_values;   // NaN where the pipeline run failed
    std::vector<bool> success;
    double extrapolated = 0.0;
    bool monotone_trend = true;
    std::string diagnostic;
};

struct PipelineOptions;  // pipeline.hpp

// R(u) = lim_{q->0} R^{(q)}(u): runs the factorization pipeline along the
// decreasing q sequence and extrapolates the last three successes to q = 0.
InfiniteTimeRuin infinite_time_ruin(const LevyModel& model, double u,
                                    const std::vector<double>& q_sequence,
                                    const PipelineOptions& options);

}  // namespace levx
