#include "levx/ruin.hpp"

#include <cmath>
#include <limits>

#include "levx/pipeline.hpp"

namespace levx {

double finite_time_ruin(const ExtremaDensity& infimum_density, double u) {
    if (infimum_density.side != ExtremumSide::Infimum) {
        throw DomainError("finite_time_ruin: needs an infimum-side density");
    }
    if (u < 0.0) throw DomainError("finite_time_ruin: initial reserve must be nonnegative");
    // P(I_q < -u) = mass of the density below -u
    double r = infimum_density.tail_mass(u);
    if (r < 0.0 && r > -1e-12) r = 0.0;
    return r;
}

RuinCurve ruin_curve(const ExtremaDensity& infimum_density, const std::vector<double>& reserves,
                     const StoppingTime& stopping, const std::string& provenance) {
    RuinCurve curve;
    curve.stopping = stopping;
    curve.provenance = provenance;
    curve.reserves = reserves;
    curve.probabilities.reserve(reserves.size());
    for (const double u : reserves) {
        curve.probabilities.push_back(finite_time_ruin(infimum_density, u));
    }
    for (std::size_t k = 1; k < curve.reserves.size(); ++k) {
        if (curve.reserves[k] >= curve.reserves[k - 1] &&
            curve.probabilities[k] > curve.probabilities[k - 1] + 1e-12) {
            throw NumericalError("ruin_curve: probabilities not non-increasing in u");
        }
    }
    return curve;
}

InfiniteTimeRuin infinite_time_ruin(const LevyModel& model, double u,
                                    const std::vector<double>& q_sequence,
                                    const PipelineOptions& options) {
    if (q_sequence.empty()) throw DomainError("infinite_time_ruin: empty q sequence");
    for (std::size_t k = 1; k < q_sequence.size(); ++k) {
        if (!(q_sequence[k] < q_sequence[k - 1])) {
            throw DomainError("infinite_time_ruin: q sequence must be strictly decreasing");
        }
    }
    if (!(q_sequence.back() > 0.0)) {
        throw DomainError("infinite_time_ruin: q values must be positive");
    }

    InfiniteTimeRuin out;
    out.q_values = q_sequence;
    for (const double q : q_sequence) {
        try {
            PipelineResult res = run_pipeline(model, StoppingTime::exponential(q), options);
            out.ruin_values.push_back(finite_time_ruin(res.infimum, u));
            out.success.push_back(true);
        } catch (const Error& e) {
            out.ruin_values.push_back(std::numeric_limits<double>::quiet_NaN());
            out.success.push_back(false);
            out.diagnostic += std::string("q=") + std::to_string(q) + ": " + e.what() + "; ";
        }
    }

    // last <= 3 successful points, Neville extrapolation to q = 0
    std::vector<double> qs, rs;
    for (std::size_t k = q_sequence.size(); k-- > 0 && qs.size() < 3;) {
        if (out.success[k]) {
            qs.push_back(q_sequence[k]);
            rs.push_back(out.ruin_values[k]);
        }
    }
    if (qs.empty()) {
        out.diagnostic += "no successful pipeline run; ";
        out.extrapolated = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    std::vector<double> p = rs;
    for (std::size_t level = 1; level < qs.size(); ++level) {
        for (std::size_t i = 0; i + level < qs.size(); ++i) {
            p[i] = ((0.0 - qs[i + level]) * p[i] - (0.0 - qs[i]) * p[i + 1]) /
                   (qs[i] - qs[i + level]);
        }
    }
    out.extrapolated = p[0];

    for (std::size_t k = 1; k < out.ruin_values.size(); ++k) {
        if (!out.success[k] || !out.success[k - 1]) continue;
        // R^{(q)}(u) should move monotonically along the q sequence
        if (k >= 2 && out.success[k - 2]) {
            const double d1 = out.ruin_values[k - 1] - out.ruin_values[k - 2];
            const double d2 = out.ruin_values[k] - out.ruin_values[k - 1];
            if (d1 * d2 < -1e-12) out.monotone_trend = false;
        }
    }
    return out;
}

}  // namespace levx
