#include "levx/levy.hpp"

#include <cmath>
#include <numbers>

#include "levx/special.hpp"

namespace levx {

namespace {

constexpr Complex kI(0.0, 1.0);

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

Complex psi_brownian(const BrownianDrift& m, Complex w) {
    return kI * m.mu * w - 0.5 * m.sigma * m.sigma * w * w;
}

Complex psi_compound_poisson(const CompoundPoissonMixedGamma& m, Complex w) {
    const Complex jump_cf = mixed_gamma_cf(m.jumps, w);
    const double mass = m.jumps.total_weight();
    return kI * m.mu * w - 0.5 * m.sigma * m.sigma * w * w + m.intensity * (jump_cf - mass);
}

Complex psi_stable(const SymmetricStable& m, Complex w) {
    const Complex mod_pow = std::pow(w * w, 0.5 * m.alpha);
    return 1.0 / (kI * m.mu * w - std::pow(m.scale, m.alpha) * mod_pow);
}

Complex psi_cosech(const CosechSquaredJumps& m, Complex w) {
    const double gamma = m.gamma_const();
    const double rho = m.rho_const();
    const Complex z = std::numbers::pi * (w - kI * m.tilt);
    return -0.5 * m.sigma * m.sigma * w * w - kI * rho * w - 4.0 * z_coth_z(z) + 4.0 * gamma;
}

// Principal-branch log phi for GH; continuous only where the path from 0
// stays inside the analyticity strip.
Complex gh_log_phi_principal(const GeneralizedHyperbolic& m, Complex w) {
    const Complex s = m.alpha * m.alpha - (m.beta + kI * w) * (m.beta + kI * w);
    const double s0 = m.alpha * m.alpha - m.beta * m.beta;
    const Complex k_num = bessel_k(m.lambda, m.delta * std::sqrt(s));
    const Complex k_den = bessel_k(m.lambda, m.delta * std::sqrt(Complex(s0)));
    return kI * m.mu * w + 0.5 * m.lambda * (std::log(Complex(s0)) - std::log(s)) +
           std::log(k_num) - std::log(k_den);
}

// log phi with the branch unwrapped along the straight path 0 -> w.
Complex gh_log_phi_continuous(const GeneralizedHyperbolic& m, Complex w) {
    if (w == Complex(0.0)) return Complex(0.0);
    // step so that the phase moves by well under pi between samples
    const double speed = std::abs(m.mu) + m.delta + 2.0;
    const int steps = std::max(8, static_cast<int>(std::ceil(std::abs(w) * speed)));
    Complex prev(0.0);
    for (int i = 1; i <= steps; ++i) {
        const Complex wi = w * (static_cast<double>(i) / steps);
        Complex v = gh_log_phi_principal(m, wi);
        const double k = std::round((prev.imag() - v.imag()) / (2.0 * std::numbers::pi));
        v += Complex(0.0, 2.0 * std::numbers::pi * k);
        prev = v;
    }
    return prev;
}

}  // namespace

double MixedGammaJumps::total_weight() const {
    double w = 0.0;
    for (const auto& t : positive) w += t.weight;
    for (const auto& t : negative) w += t.weight;
    return w;
}

void MixedGammaJumps::validate() const {
    if (positive.empty() && negative.empty()) {
        throw DomainError("MixedGammaJumps: at least one term required");
    }
    for (const auto& side : {positive, negative}) {
        for (const auto& t : side) {
            if (t.weight <= 0.0) throw DomainError("MixedGammaJumps: weights must be positive");
            if (t.shape < 1) throw DomainError("MixedGammaJumps: shapes must be >= 1");
            if (t.rate <= 0.0) throw DomainError("MixedGammaJumps: rates must be positive");
        }
    }
}

double CosechSquaredJumps::gamma_const() const {
    if (tilt == 0.0) return 1.0;
    const double pa = std::numbers::pi * tilt;
    return pa * std::cos(pa) / std::sin(pa);
}

double CosechSquaredJumps::rho_const() const {
    if (tilt == 0.0) return -mu;
    const double gamma = gamma_const();
    return 4.0 * std::numbers::pi * std::numbers::pi * tilt +
           4.0 * gamma * (gamma - 1.0) / tilt - mu;
}

void validate(const LevyModel& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BrownianDrift>) {
                if (m.sigma < 0.0) throw DomainError("BrownianDrift: sigma must be nonnegative");
            } else if constexpr (std::is_same_v<T, CompoundPoissonMixedGamma>) {
                if (m.sigma < 0.0) throw DomainError("CompoundPoisson: sigma must be nonnegative");
                if (m.intensity <= 0.0) throw DomainError("CompoundPoisson: intensity must be positive");
                m.jumps.validate();
            } else if constexpr (std::is_same_v<T, SymmetricStable>) {
                if (!(m.alpha > 0.0 && m.alpha <= 2.0)) {
                    throw DomainError("SymmetricStable: index must lie in (0, 2]");
                }
                if (m.scale <= 0.0) throw DomainError("SymmetricStable: scale must be positive");
            } else if constexpr (std::is_same_v<T, CosechSquaredJumps>) {
                if (m.sigma < 0.0) throw DomainError("CosechSquaredJumps: sigma must be nonnegative");
                if (!(std::abs(m.tilt) < 1.0)) {
                    throw DomainError("CosechSquaredJumps: |tilt| must be below 1");
                }
            } else if constexpr (std::is_same_v<T, GeneralizedHyperbolic>) {
                if (m.alpha <= 0.0) throw DomainError("GeneralizedHyperbolic: alpha must be positive");
                if (!(std::abs(m.beta) < m.alpha)) {
                    throw DomainError("GeneralizedHyperbolic: beta must lie in (-alpha, alpha)");
                }
                if (m.delta <= 0.0) throw DomainError("GeneralizedHyperbolic: delta must be positive");
            }
        },
        model);
}

const char* family_name(const LevyModel& model) {
    struct Visitor {
        const char* operator()(const BrownianDrift&) const { return "brownian_drift"; }
        const char* operator()(const CompoundPoissonMixedGamma&) const {
            return "compound_poisson_mixed_gamma";
        }
        const char* operator()(const SymmetricStable&) const { return "symmetric_stable"; }
        const char* operator()(const CosechSquaredJumps&) const { return "cosech_squared"; }
        const char* operator()(const GeneralizedHyperbolic&) const {
            return "generalized_hyperbolic";
        }
    };
    return std::visit(Visitor{}, model);
}

bool is_true_cf_family(const LevyModel& model) {
    return !std::holds_alternative<SymmetricStable>(model) &&
           !std::holds_alternative<GeneralizedHyperbolic>(model);
}

StoppingTime StoppingTime::exponential(double q) {
    StoppingTime s;
    s.kind = Kind::Exponential;
    s.q = q;
    s.validate();
    return s;
}

StoppingTime StoppingTime::geometric(double q) {
    StoppingTime s;
    s.kind = Kind::Geometric;
    s.q = q;
    s.validate();
    return s;
}

void StoppingTime::validate() const {
    if (kind == Kind::Exponential) {
        if (!(q > 0.0)) throw DomainError("StoppingTime: exponential parameter must be positive");
    } else {
        if (!(q > 0.0 && q < 1.0)) {
            throw DomainError("StoppingTime: geometric parameter must lie in (0, 1)");
        }
    }
}

double StoppingTime::mean() const {
    return kind == Kind::Exponential ? 1.0 / q : q / (1.0 - q);
}

Complex mixed_gamma_cf(const MixedGammaJumps& jumps, Complex w) {
    Complex acc(0.0);
    for (const auto& t : jumps.positive) {
        acc += t.weight * std::pow(t.rate / (t.rate - kI * w), t.shape);
    }
    for (const auto& t : jumps.negative) {
        acc += t.weight * std::pow(t.rate / (t.rate + kI * w), t.shape);
    }
    return acc;
}

double mixed_gamma_density(const MixedGammaJumps& jumps, double x) {
    double acc = 0.0;
    if (x >= 0.0) {
        for (const auto& t : jumps.positive) {
            acc += t.weight * std::pow(t.rate, t.shape) * std::pow(x, t.shape - 1) *
                   std::exp(-t.rate * x) / factorial(t.shape - 1);
        }
    }
    if (x <= 0.0) {
        for (const auto& t : jumps.negative) {
            acc += t.weight * std::pow(t.rate, t.shape) * std::pow(-x, t.shape - 1) *
                   std::exp(t.rate * x) / factorial(t.shape - 1);
        }
    }
    return acc;
}

Complex gh_char_function(const GeneralizedHyperbolic& m, Complex w) {
    const Complex s = m.alpha * m.alpha - (m.beta + kI * w) * (m.beta + kI * w);
    if (s.imag() == 0.0 && s.real() <= 0.0) {
        throw DomainError("gh_char_function: argument on the branch cut");
    }
    const double s0 = m.alpha * m.alpha - m.beta * m.beta;
    const Complex ratio = std::pow(Complex(s0) / s, 0.5 * m.lambda);
    const Complex k_num = bessel_k(m.lambda, m.delta * std::sqrt(s));
    const Complex k_den = bessel_k(m.lambda, m.delta * std::sqrt(Complex(s0)));
    return std::exp(kI * m.mu * w) * ratio * k_num / k_den;
}

Complex psi(const LevyModel& model, Complex w) {
    if (w == Complex(0.0) && !std::holds_alternative<SymmetricStable>(model)) {
        return Complex(0.0);
    }
    return std::visit(
        [&](const auto& m) -> Complex {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BrownianDrift>) {
                return psi_brownian(m, w);
            } else if constexpr (std::is_same_v<T, CompoundPoissonMixedGamma>) {
                return psi_compound_poisson(m, w);
            } else if constexpr (std::is_same_v<T, SymmetricStable>) {
                return psi_stable(m, w);
            } else if constexpr (std::is_same_v<T, CosechSquaredJumps>) {
                return psi_cosech(m, w);
            } else {
                return -gh_log_phi_continuous(m, w);
            }
        },
        model);
}

Complex stopped_cf(const LevyModel& model, const StoppingTime& stop, Complex w) {
    if (w == Complex(0.0)) return Complex(1.0);
    const Complex p = psi(model, w);
    Complex den;
    Complex num;
    if (stop.kind == StoppingTime::Kind::Exponential) {
        num = stop.q;
        den = stop.q - p;
    } else {
        // geometric stopping: sum q^n e^{n psi} gives the e^{+psi} denominator
        num = 1.0 - stop.q;
        den = 1.0 - stop.q * std::exp(p);
    }
    if (std::abs(den) < 1e-300) {
        throw NumericalError("stopped_cf: evaluation at a pole of h");
    }
    return num / den;
}

Complex stopping_denominator(const LevyModel& model, const StoppingTime& stop, Complex w) {
    if (const auto* gh = std::get_if<GeneralizedHyperbolic>(&model)) {
        // exp form: zeros match q - psi = 0 (mod 2 pi i) without any log branch
        const Complex phi_v = gh_char_function(*gh, w);
        if (stop.kind == StoppingTime::Kind::Exponential) {
            return 1.0 - std::exp(stop.q) * phi_v;
        }
        return 1.0 - stop.q / phi_v;  // e^{psi} = 1/phi under the dual sign
    }
    const Complex p = psi(model, w);
    if (stop.kind == StoppingTime::Kind::Exponential) return stop.q - p;
    return 1.0 - stop.q * std::exp(p);
}

GridFunction sample_stopped_cf(const LevyModel& model, const StoppingTime& stop,
                               const GridFunction& grid_shape) {
    const std::size_t n = grid_shape.size();
    std::vector<Complex> values(n);
    if (const auto* gh = std::get_if<GeneralizedHyperbolic>(&model)) {
        // unwrap log phi continuously outward from the node nearest 0
        std::vector<Complex> logphi(n);
        std::size_t k0 = 0;
        double best = std::abs(grid_shape.node(0));
        for (std::size_t k = 1; k < n; ++k) {
            const double d = std::abs(grid_shape.node(k));
            if (d < best) { best = d; k0 = k; }
        }
        auto unwrap = [&](Complex v, Complex prev) {
            const double k = std::round((prev.imag() - v.imag()) / (2.0 * std::numbers::pi));
            return v + Complex(0.0, 2.0 * std::numbers::pi * k);
        };
        logphi[k0] = gh_log_phi_continuous(*gh, grid_shape.node(k0));
        for (std::size_t k = k0 + 1; k < n; ++k) {
            logphi[k] = unwrap(gh_log_phi_principal(*gh, grid_shape.node(k)), logphi[k - 1]);
        }
        for (std::size_t k = k0; k-- > 0;) {
            logphi[k] = unwrap(gh_log_phi_principal(*gh, grid_shape.node(k)), logphi[k + 1]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const Complex psi_v = -logphi[k];  // dual sign convention
            Complex den, num;
            if (stop.kind == StoppingTime::Kind::Exponential) {
                num = stop.q;
                den = stop.q - psi_v;
            } else {
                num = 1.0 - stop.q;
                den = 1.0 - stop.q * std::exp(psi_v);
            }
            values[k] = (grid_shape.node(k) == 0.0) ? Complex(1.0) : num / den;
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            values[k] = stopped_cf(model, stop, grid_shape.node(k));
        }
    }
    return GridFunction(grid_shape.x0(), grid_shape.spacing(), std::move(values));
}

}  // namespace levx
