#include "levx/whf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "levx/polynomial.hpp"

namespace levx {

namespace {

constexpr Complex kI(0.0, 1.0);

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// complex tail integral int_a^inf x^d e^{-c x} dx = d! e^{-ca}/c^{d+1} sum (ca)^k/k!
Complex gamma_tail(int d, Complex c, double a) {
    Complex sum(0.0);
    Complex term(1.0);
    const Complex ca = c * a;
    for (int k = 0; k <= d; ++k) {
        if (k > 0) term *= ca / static_cast<double>(k);
        sum += term;
    }
    return factorial(d) * std::exp(-ca) * sum / std::pow(c, d + 1);
}

struct PoleGroup {
    Complex location;  // s-plane
    int multiplicity;
};

std::vector<PoleGroup> group_poles(const std::vector<Complex>& poles) {
    std::vector<PoleGroup> groups;
    for (const auto& p : poles) {
        bool merged = false;
        for (auto& g : groups) {
            if (std::abs(g.location - p) < 1e-8 * (1.0 + std::abs(p))) {
                ++g.multiplicity;
                merged = true;
                break;
            }
        }
        if (!merged) groups.push_back({p, 1});
    }
    return groups;
}

}  // namespace

// ---------------------------------------------------------------------------
// HalfPlaneFactor
// ---------------------------------------------------------------------------

Complex HalfPlaneFactor::eval(Complex w) const {
    const Complex s = kI * w;
    Complex num(scale);
    for (const auto& z : zeros_s) num *= (s - z);
    Complex den(1.0);
    for (const auto& p : poles_s) den *= (s - p);
    return num / den;
}

std::vector<Complex> HalfPlaneFactor::zeros_omega() const {
    std::vector<Complex> out;
    out.reserve(zeros_s.size());
    for (const auto& z : zeros_s) out.push_back(-kI * z);
    return out;
}

std::vector<Complex> HalfPlaneFactor::poles_omega() const {
    std::vector<Complex> out;
    out.reserve(poles_s.size());
    for (const auto& p : poles_s) out.push_back(-kI * p);
    return out;
}

void HalfPlaneFactor::validate() const {
    const double sign = (side == ExtremumSide::Supremum) ? 1.0 : -1.0;
    for (const auto& p : poles_s) {
        if (sign * p.real() <= 0.0) {
            throw DomainError("HalfPlaneFactor: pole on the wrong side of the axis");
        }
    }
    // conjugate closure in the s-plane keeps the inverse transform real
    for (const auto* roots : {&zeros_s, &poles_s}) {
        for (const auto& z : *roots) {
            if (std::abs(z.imag()) < 1e-10) continue;
            bool found = false;
            for (const auto& y : *roots) {
                if (std::abs(y - std::conj(z)) < 1e-7 * (1.0 + std::abs(z))) {
                    found = true;
                    break;
                }
            }
            if (!found) throw DomainError("HalfPlaneFactor: roots not conjugate-closed");
        }
    }
}

// ---------------------------------------------------------------------------
// carlemann_split
// ---------------------------------------------------------------------------

std::pair<HalfPlaneFactor, HalfPlaneFactor> carlemann_split(const RationalApproximant& r) {
    r.validate();

    // active terms only; a dropped coefficient must not leave its pole behind
    std::vector<std::pair<BasisTerm, double>> terms;
    for (const auto& tc : r.terms) {
        if (tc.second > 0.0) terms.push_back(tc);
    }
    if (terms.empty() && r.a0 <= 0.0) {
        throw DomainError("carlemann_split: approximant is identically zero");
    }

    // distinct pole factors keyed by (form, rate, osc); multiplicity = max power
    struct Key {
        BasisForm form;
        double rate, osc;
        bool operator<(const Key& o) const {
            if (form != o.form) return form < o.form;
            if (rate != o.rate) return rate < o.rate;
            return osc < o.osc;
        }
    };
    std::map<Key, int> factors;
    for (const auto& [term, c] : terms) {
        Key k{term.form, term.rate, term.osc};
        auto [it, inserted] = factors.try_emplace(k, term.power);
        if (!inserted) it->second = std::max(it->second, term.power);
    }

    auto base_poly = [](const Key& k) -> Polynomial {
        switch (k.form) {
            case BasisForm::R1:
                return Polynomial::linear(k.rate, 1.0);  // s + b
            case BasisForm::R2:
                return Polynomial::linear(k.rate, -1.0);  // b - s
            case BasisForm::R3: {
                const Polynomial u = Polynomial::linear(k.rate, 1.0);
                return u * (u * u + Polynomial::constant(k.osc * k.osc));
            }
            case BasisForm::R4: {
                const Polynomial u = Polynomial::linear(k.rate, -1.0);
                return u * (u * u + Polynomial::constant(k.osc * k.osc));
            }
        }
        return Polynomial::constant(1.0);
    };

    auto poly_pow = [](const Polynomial& p, int n) {
        Polynomial out = Polynomial::constant(1.0);
        for (int k = 0; k < n; ++k) out = out * p;
        return out;
    };

    Polynomial q_poly = Polynomial::constant(1.0);
    for (const auto& [key, mult] : factors) q_poly = q_poly * poly_pow(base_poly(key), mult);

    Polynomial p_poly = q_poly * r.a0;
    for (const auto& [term, c] : terms) {
        Polynomial partial = Polynomial::constant(c);
        for (const auto& [key, mult] : factors) {
            const Key own{term.form, term.rate, term.osc};
            const int remaining = (own < key || key < own) ? mult : mult - term.power;
            if (remaining > 0) partial = partial * poly_pow(base_poly(key), remaining);
        }
        p_poly += partial;
    }
    if (p_poly.is_zero()) throw DomainError("carlemann_split: zero numerator");

    std::vector<Complex> num_roots;
    try {
        num_roots = polynomial_roots(p_poly);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("carlemann_split: numerator root finding failed: ") +
                             e.what());
    }

    // s-plane denominator roots are known from the basis structure
    std::vector<Complex> den_roots;
    for (const auto& [key, mult] : factors) {
        std::vector<Complex> roots;
        switch (key.form) {
            case BasisForm::R1:
                roots = {Complex(-key.rate, 0.0)};
                break;
            case BasisForm::R2:
                roots = {Complex(key.rate, 0.0)};
                break;
            case BasisForm::R3:
                roots = {Complex(-key.rate, 0.0), Complex(-key.rate, key.osc),
                         Complex(-key.rate, -key.osc)};
                break;
            case BasisForm::R4:
                roots = {Complex(key.rate, 0.0), Complex(key.rate, key.osc),
                         Complex(key.rate, -key.osc)};
                break;
        }
        for (int m = 0; m < mult; ++m) {
            den_roots.insert(den_roots.end(), roots.begin(), roots.end());
        }
    }

    const double axis_tol = 1e-9;
    for (const auto& z : num_roots) {
        if (std::abs(z.real()) <= axis_tol * (1.0 + std::abs(z))) {
            throw NumericalError("carlemann_split: numerator zero on the real omega axis, "
                                 "factorization impossible");
        }
    }

    // leading constant of r = P/Q in monic-root form
    double q_lead = 1.0;
    for (const auto& [key, mult] : factors) {
        const double lead = base_poly(key).leading();
        for (int m = 0; m < mult; ++m) q_lead *= lead;
    }
    const double c_lead = p_poly.leading() / q_lead;

    HalfPlaneFactor sup, inf;
    sup.side = ExtremumSide::Supremum;
    inf.side = ExtremumSide::Infimum;
    for (const auto& z : num_roots) {
        (z.real() > 0.0 ? sup : inf).zeros_s.push_back(z);
    }
    for (const auto& p : den_roots) {
        (p.real() > 0.0 ? sup : inf).poles_s.push_back(p);
    }
    const double root_scale = std::sqrt(std::abs(c_lead));
    sup.scale = root_scale;
    inf.scale = (c_lead >= 0.0) ? root_scale : -root_scale;
    // the monic-root form can leave both factors negative at the origin
    // (odd count of (b - s)-oriented factors); flip both, product unchanged
    if (sup.eval(Complex(0.0)).real() < 0.0) {
        sup.scale = -sup.scale;
        inf.scale = -inf.scale;
    }
    sup.validate();
    inf.validate();
    return {sup, inf};
}

NormalizedFactors normalize_factors(const HalfPlaneFactor& plus, const HalfPlaneFactor& minus) {
    NormalizedFactors out;
    out.plus = plus;
    out.minus = minus;
    for (auto* f : {&out.plus, &out.minus}) {
        const Complex v0 = f->eval(Complex(0.0));
        if (std::abs(v0) < 1e-12) {
            throw DomainError("normalize_factors: factor vanishes at the origin");
        }
        if (std::abs(v0.imag()) > 1e-9 * std::abs(v0) || v0.real() <= 0.0) {
            throw NumericalError("normalize_factors: factor value at 0 is not a positive real");
        }
        f->scale /= v0.real();
    }
    out.rescale_plus = out.plus.scale / plus.scale;
    out.rescale_minus = out.minus.scale / minus.scale;
    return out;
}

HalfPlaneFactor meromorphic_factor(const std::vector<double>& alphas,
                                   const std::vector<double>& betas, std::size_t n_terms,
                                   ProductSign sign) {
    if (n_terms < 1) throw DomainError("meromorphic_factor: empty product");
    if (alphas.size() < n_terms || betas.size() < n_terms) {
        throw DomainError("meromorphic_factor: fewer rates than requested terms");
    }
    double prev = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k) {
        if (!(betas[k] > prev)) throw DomainError("meromorphic_factor: interlacing violated");
        if (!(alphas[k] > betas[k])) throw DomainError("meromorphic_factor: interlacing violated");
        prev = alphas[k];
    }

    HalfPlaneFactor f;
    // (1 + i w / a) has its zero at w = ia, s-plane -a: an infimum-side factor
    const double axis = (sign == ProductSign::Plus) ? -1.0 : 1.0;
    f.side = (sign == ProductSign::Plus) ? ExtremumSide::Infimum : ExtremumSide::Supremum;
    double scale = 1.0;
    for (std::size_t k = 0; k < n_terms; ++k) {
        f.zeros_s.push_back(Complex(axis * alphas[k], 0.0));
        f.poles_s.push_back(Complex(axis * betas[k], 0.0));
        scale *= betas[k] / alphas[k];
    }
    f.scale = scale;  // value at 0 is exactly 1
    f.validate();
    return f;
}

// ---------------------------------------------------------------------------
// ExtremaDensity
// ---------------------------------------------------------------------------

double ExtremaDensity::eval(double x) const {
    const double m = (side == ExtremumSide::Supremum) ? x : -x;
    if (m < 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& t : terms) {
        acc += t.coef * std::pow(m, t.degree) * std::exp(-t.rate * m) *
               std::cos(t.freq * m + t.phase);
    }
    return acc;
}

double ExtremaDensity::total_mass() const { return atom + tail_mass(0.0); }

double ExtremaDensity::tail_mass(double a) const {
    if (a < 0.0) throw DomainError("ExtremaDensity::tail_mass: need a >= 0");
    double acc = 0.0;
    for (const auto& t : terms) {
        const Complex c(t.rate, -t.freq);
        acc += (t.coef * std::exp(kI * t.phase) * gamma_tail(t.degree, c, a)).real();
    }
    return acc;
}

double ExtremaDensity::cdf(double x) const {
    if (side == ExtremumSide::Supremum) {
        if (x < 0.0) return 0.0;
        return atom + (tail_mass(0.0) - tail_mass(x));
    }
    if (x >= 0.0) return 1.0;
    return tail_mass(-x);
}

double ExtremaDensity::min_rate() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& t : terms) r = std::min(r, t.rate);
    return r;
}

// ---------------------------------------------------------------------------
// density_from_factor
// ---------------------------------------------------------------------------

ExtremaDensity density_from_factor(const HalfPlaneFactor& factor) {
    factor.validate();
    const Complex v0 = factor.eval(Complex(0.0));
    if (std::abs(v0 - 1.0) > 1e-10) {
        throw DomainError("density_from_factor: factor must be normalized to 1 at the origin");
    }
    if (factor.zeros_s.size() > factor.poles_s.size()) {
        throw DomainError("density_from_factor: factor grows at infinity");
    }

    ExtremaDensity density;
    density.side = factor.side;

    double atom = 0.0;
    if (factor.zeros_s.size() == factor.poles_s.size()) atom = factor.scale;
    if (atom < -1e-10) {
        throw NumericalError("density_from_factor: negative atom, approximant is not "
                             "positive-definite");
    }
    density.atom = (std::abs(atom) < 1e-9) ? 0.0 : atom;

    const double sup_sign = (factor.side == ExtremumSide::Supremum) ? 1.0 : -1.0;
    const auto groups = group_poles(factor.poles_s);

    std::vector<bool> done(groups.size(), false);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        if (done[gi]) continue;
        done[gi] = true;
        const Complex b = groups[gi].location;
        const int m = groups[gi].multiplicity;
        if (m > 4) {
            throw DomainError("density_from_factor: pole multiplicity above 4 not supported");
        }

        // mark the conjugate partner as handled; its contribution is folded in
        bool has_partner = false;
        if (std::abs(b.imag()) > 1e-10) {
            for (std::size_t gj = gi + 1; gj < groups.size(); ++gj) {
                if (!done[gj] &&
                    std::abs(groups[gj].location - std::conj(b)) < 1e-7 * (1.0 + std::abs(b))) {
                    done[gj] = true;
                    has_partner = true;
                    break;
                }
            }
            if (!has_partner) {
                throw NumericalError("density_from_factor: unpaired complex pole");
            }
        }

        // Taylor coefficients of G(s) = F(s)(s-b)^m at b via log-derivatives
        Complex g0(factor.scale);
        for (const auto& z : factor.zeros_s) g0 *= (b - z);
        Complex l1(0.0), l2(0.0), l3(0.0);
        for (const auto& z : factor.zeros_s) {
            const Complex d = b - z;
            l1 += 1.0 / d;
            l2 -= 1.0 / (d * d);
            l3 += 2.0 / (d * d * d);
        }
        for (std::size_t gj = 0; gj < groups.size(); ++gj) {
            if (gj == gi) continue;
            const Complex d = b - groups[gj].location;
            const double mj = groups[gj].multiplicity;
            g0 /= std::pow(d, mj);
            l1 -= mj / d;
            l2 += mj / (d * d);
            l3 -= 2.0 * mj / (d * d * d);
        }
        // taylor[k] = G^{(k)}(b)/k!
        std::vector<Complex> taylor(m);
        taylor[0] = g0;
        if (m > 1) taylor[1] = g0 * l1;
        if (m > 2) taylor[2] = 0.5 * g0 * (l1 * l1 + l2);
        if (m > 3) taylor[3] = g0 * (l1 * l1 * l1 + 3.0 * l1 * l2 + l3) / 6.0;

        for (int d = 1; d <= m; ++d) {
            const Complex residue = taylor[m - d];  // coefficient of 1/(s-b)^d
            if (std::abs(residue) < 1e-14 * (1.0 + std::abs(g0))) continue;
            Complex w = residue / factorial(d - 1);
            if (factor.side == ExtremumSide::Supremum && (d % 2 == 1)) w = -w;
            // supremum: extra (-1)^d from 1/(iw-b)^d = (-1)^d/(b-iw)^d
            DensityTerm term;
            term.degree = d - 1;
            term.rate = sup_sign * b.real();
            if (term.rate <= 0.0) {
                throw NumericalError("density_from_factor: nonpositive decay rate");
            }
            if (std::abs(b.imag()) <= 1e-10) {
                if (std::abs(w.imag()) > 1e-7 * (1.0 + std::abs(w))) {
                    throw NumericalError("density_from_factor: complex coefficient at a real "
                                         "s-plane pole");
                }
                term.coef = w.real();
                term.freq = 0.0;
                term.phase = 0.0;
            } else {
                // fold the conjugate pair: 2 Re[w e^{-b m}] (sup) / 2 Re[w e^{b m}] (inf)
                term.coef = 2.0 * std::abs(w);
                term.freq = -sup_sign * b.imag();
                term.phase = std::arg(w);
            }
            density.terms.push_back(term);
        }
    }

    const double mass = density.total_mass();
    if (std::abs(mass - 1.0) > 1e-8) {
        throw NumericalError("density_from_factor: normalization failed, mass = " +
                             std::to_string(mass));
    }
    return density;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

double error_bound_factorization(double delta, const NormOrder& order) {
    if (delta < 0.0) throw DomainError("error_bound_factorization: delta must be nonnegative");
    const double t = std::tan(std::numbers::pi / (2.0 * order.p()));
    return 0.5 * t * delta * delta + (t + 0.5) * delta;
}

double error_bound_compound_poisson(double nu_delta, const StoppingTime& stop) {
    if (nu_delta < 0.0) {
        throw DomainError("error_bound_compound_poisson: error must be nonnegative");
    }
    stop.validate();
    const double q = stop.q;
    const double root = std::sqrt(8.0 * std::numbers::pi);
    if (stop.kind == StoppingTime::Kind::Exponential) {
        return nu_delta * nu_delta / (q * q * root) + 3.0 * nu_delta / (2.0 * q);
    }
    const double one_minus = 1.0 - q;
    return one_minus * one_minus * nu_delta * nu_delta / (q * q * root) +
           3.0 * one_minus * nu_delta / (2.0 * q);
}

}  // namespace levx
