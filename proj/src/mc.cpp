#include "levx/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace levx {

namespace {

// splitmix64, used to derive independent per-path streams from (seed, path)
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed ^ (0xD1342543DE82EF95ULL * (stream + 1));
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in (0, 1)
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Marsaglia polar
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

double draw_stopping_time(Rng& rng, const StoppingTime& stop) {
    if (stop.kind == StoppingTime::Kind::Exponential) return rng.exponential(stop.q);
    // P(tau = n) = (1-q) q^n on {0, 1, 2, ...}
    const double u = rng.uniform();
    return std::floor(std::log(u) / std::log(stop.q));
}

// extrema of a Brownian bridge over one step, conditioned on the endpoints
void bridge_extrema(Rng& rng, double a, double b, double var, double& seg_max, double& seg_min) {
    const double d = b - a;
    const double mx = 0.5 * (a + b + std::sqrt(d * d - 2.0 * var * std::log(rng.uniform())));
    const double mn = 0.5 * (a + b - std::sqrt(d * d - 2.0 * var * std::log(rng.uniform())));
    seg_max = mx;
    seg_min = mn;
}

ExtremaSample simulate_brownian_path(const BrownianDrift& m, const StoppingTime& stop,
                                     const SimConfig& cfg, Rng& rng) {
    const double tau = std::min(draw_stopping_time(rng, stop), cfg.horizon);
    // geometric stopping observes the embedded unit-time walk exactly
    const double step = (stop.kind == StoppingTime::Kind::Geometric) ? 1.0 : cfg.dt;
    double x = 0.0, sup = 0.0, inf = 0.0;
    double t = 0.0;
    while (t < tau) {
        const double h = std::min(step, tau - t);
        const double prev = x;
        x += m.mu * h + m.sigma * std::sqrt(h) * rng.normal();
        if (cfg.bridge_correction && stop.kind == StoppingTime::Kind::Exponential &&
            m.sigma > 0.0) {
            double seg_max, seg_min;
            bridge_extrema(rng, prev, x, m.sigma * m.sigma * h, seg_max, seg_min);
            sup = std::max(sup, seg_max);
            inf = std::min(inf, seg_min);
        } else {
            sup = std::max(sup, x);
            inf = std::min(inf, x);
        }
        t += h;
    }
    return {sup, inf};
}

double sample_mixed_gamma(const MixedGammaJumps& jumps, Rng& rng) {
    const double total = jumps.total_weight();
    double pick = rng.uniform() * total;
    for (const auto* side : {&jumps.positive, &jumps.negative}) {
        const bool positive = (side == &jumps.positive);
        for (const auto& term : *side) {
            pick -= term.weight;
            if (pick <= 0.0) {
                double g = 0.0;
                for (int j = 0; j < term.shape; ++j) g += rng.exponential(term.rate);
                return positive ? g : -g;
            }
        }
    }
    // numerical edge of the roulette wheel: fall back to the last component
    const bool positive = jumps.negative.empty();
    const auto& term = positive ? jumps.positive.back() : jumps.negative.back();
    double g = 0.0;
    for (int j = 0; j < term.shape; ++j) g += rng.exponential(term.rate);
    return positive ? g : -g;
}

ExtremaSample simulate_cp_path(const CompoundPoissonMixedGamma& m, const StoppingTime& stop,
                               const SimConfig& cfg, Rng& rng) {
    const double tau = std::min(draw_stopping_time(rng, stop), cfg.horizon);
    double x = 0.0, sup = 0.0, inf = 0.0;
    double t = 0.0;
    double next_jump = rng.exponential(m.intensity);
    const bool diffuse = m.sigma > 0.0;
    while (t < tau) {
        const double segment_end = std::min(tau, next_jump);
        // drift/diffusion over (t, segment_end]
        if (diffuse) {
            double s = t;
            while (s < segment_end) {
                const double h = std::min(cfg.dt, segment_end - s);
                x += m.mu * h + m.sigma * std::sqrt(h) * rng.normal();
                sup = std::max(sup, x);
                inf = std::min(inf, x);
                s += h;
            }
        } else {
            x += m.mu * (segment_end - t);
            sup = std::max(sup, x);
            inf = std::min(inf, x);
        }
        t = segment_end;
        if (t >= tau) break;
        x += sample_mixed_gamma(m.jumps, rng);
        sup = std::max(sup, x);
        inf = std::min(inf, x);
        next_jump += rng.exponential(m.intensity);
    }
    return {sup, inf};
}

}  // namespace

void SimConfig::validate() const {
    if (paths < 1) throw DomainError("SimConfig: need at least one path");
    if (!(dt > 0.0)) throw DomainError("SimConfig: dt must be positive");
    if (!(horizon > 0.0)) throw DomainError("SimConfig: horizon must be positive");
}

std::vector<ExtremaSample> simulate_extrema(const LevyModel& model, const StoppingTime& stop,
                                            const SimConfig& cfg) {
    cfg.validate();
    stop.validate();
    validate(model);
    if (!std::holds_alternative<BrownianDrift>(model) &&
        !std::holds_alternative<CompoundPoissonMixedGamma>(model)) {
        throw DomainError("simulate_extrema: only exact-increment families "
                          "(brownian_drift, compound_poisson_mixed_gamma) are supported");
    }
    if (stop.kind == StoppingTime::Kind::Exponential && cfg.dt > stop.mean() / 10.0) {
        std::fprintf(stderr,
                     "simulate_extrema: warning: dt = %g is coarse for mean stopping time %g\n",
                     cfg.dt, stop.mean());
    }

    std::vector<ExtremaSample> samples(cfg.paths);
    auto run_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t path = begin; path < end; ++path) {
            Rng rng(cfg.seed, path);
            if (const auto* bm = std::get_if<BrownianDrift>(&model)) {
                samples[path] = simulate_brownian_path(*bm, stop, cfg, rng);
            } else {
                samples[path] = simulate_cp_path(std::get<CompoundPoissonMixedGamma>(model),
                                                 stop, cfg, rng);
            }
        }
    };

    unsigned workers = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, 64));
    if (workers == 1 || cfg.paths < 256) {
        run_block(0, cfg.paths);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cfg.paths + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(cfg.paths, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_block, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return samples;
}

double ks_distance(const std::vector<double>& samples, const ExtremaDensity& density) {
    if (samples.empty()) throw DomainError("ks_distance: empty sample set");
    const bool sup_side = density.side == ExtremumSide::Supremum;
    for (const double s : samples) {
        if ((sup_side && s < 0.0) || (!sup_side && s > 0.0)) {
            throw DomainError("ks_distance: sample on the wrong side of the density's support");
        }
    }
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    // tie-aware sup over distinct sample values; the law may carry an atom at 0
    double d = 0.0;
    std::size_t k = 0;
    std::size_t below = 0;
    while (k < sorted.size()) {
        const double x = sorted[k];
        std::size_t upto = k;
        while (upto < sorted.size() && sorted[upto] == x) ++upto;
        const double f_right = density.cdf(x);
        const double f_left =
            (x == 0.0) ? (sup_side ? 0.0 : 1.0 - density.atom) : f_right;
        d = std::max(d, std::abs(f_left - static_cast<double>(below) / n));
        d = std::max(d, std::abs(f_right - static_cast<double>(upto) / n));
        below = upto;
        k = upto;
    }
    return d;
}

}  // namespace levx
