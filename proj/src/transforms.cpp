#include "levx/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levx/fft.hpp"

namespace levx {

namespace {

constexpr Complex kI(0.0, 1.0);

void apply_taper(std::vector<Complex>& v, double fraction) {
    const std::size_t n = v.size();
    const auto m = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    if (m == 0) return;
    for (std::size_t k = 0; k < m; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(m);
        const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * t));
        v[k] *= w;
        v[n - 1 - k] *= w;
    }
}

void check_end_decay(const std::vector<Complex>& values, double tol) {
    double peak = 0.0;
    for (const auto& v : values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return;
    const std::size_t n = values.size();
    const std::size_t edge = std::max<std::size_t>(1, n / 128);
    double end_mag = 0.0;
    for (std::size_t k = 0; k < edge; ++k) {
        end_mag = std::max(end_mag, std::abs(values[k]));
        end_mag = std::max(end_mag, std::abs(values[n - 1 - k]));
    }
    if (end_mag > tol * peak) {
        throw DomainError("hilbert_transform: grid too small, samples near the ends "
                          "have not decayed");
    }
}

// Circular spectral multiplier +i sign(k); DC and Nyquist bins drop out.
void circular_hilbert(std::vector<Complex>& work) {
    fft(work);
    const std::size_t n = work.size();
    work[0] = Complex(0.0, 0.0);
    if (n % 2 == 0) work[n / 2] = Complex(0.0, 0.0);
    for (std::size_t j = 1; j < n / 2; ++j) work[j] *= kI;
    for (std::size_t j = n / 2 + 1; j < n; ++j) work[j] *= -kI;
    ifft(work);
}

double bump(double x) { return 1.0 / (1.0 + x * x); }       // H[bump] = tail
double tail(double x) { return -x / (1.0 + x * x); }        // H[tail] = -bump

}  // namespace

// The circular FFT model only matches the line transform for functions that
// decay fast and carry no mass: total mass produces a 1/x transform tail the
// periodic model cannot represent.  The input is therefore split against two
// closed-form template pairs, b = 1/(1+x^2) and H_b = -x/(1+x^2):
//   H[u] = H_circ[u - c_e b - c_o H_b] + c_e H_b - c_o b,
// with c_e matching the grid mass and c_o the odd 1/x far field.  The identity
// holds for any c; the choice only has to make the remainder circular-friendly.
// Applying the transform twice then rides the exact template pair, which is
// what makes the anti-involution property hold on mass-carrying inputs.
GridFunction hilbert_transform(const GridFunction& f, const HilbertOptions& opts) {
    const std::size_t n = f.size();
    const std::vector<Complex>& u = f.values();

    // odd part against the 1/x template on the outer 20% of nodes; the
    // node-mirror pairing k <-> n-k needs a symmetric grid
    const double span = f.node(0) + f.node(n - 1) + f.spacing();
    const bool symmetric = std::abs(span) < 1e-9 * (1.0 + std::abs(f.node(0)));
    Complex tail_num(0.0);
    double tail_den = 0.0;
    const std::size_t edge = std::max<std::size_t>(2, n / 5);
    if (symmetric) {
        for (std::size_t k = 1; k < edge; ++k) {
            const std::size_t mirror = n - k;
            if (mirror >= n) continue;
            const double x = f.node(k);
            const Complex odd = 0.5 * (u[k] - u[mirror]);
            tail_num += odd * tail(x);
            tail_den += tail(x) * tail(x);
        }
    }
    const Complex c_o = (tail_den > 0.0) ? tail_num / tail_den : Complex(0.0);

    Complex mass(0.0);
    double bump_mass = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mass += u[k] - c_o * tail(f.node(k));
        bump_mass += bump(f.node(k));
    }
    const Complex c_e = mass / bump_mass;

    std::vector<Complex> rem(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = f.node(k);
        rem[k] = u[k] - c_e * bump(x) - c_o * tail(x);
    }
    if (opts.check_decay) check_end_decay(rem, opts.decay_tol);
    if (opts.taper) apply_taper(rem, opts.taper_fraction);
    circular_hilbert(rem);

    for (std::size_t k = 0; k < n; ++k) {
        const double x = f.node(k);
        rem[k] += c_e * tail(x) - c_o * bump(x);
    }
    return GridFunction(f.x0(), f.spacing(), std::move(rem));
}

GridFunction plemelj_radial_limits(const GridFunction& f, PlemeljSide side,
                                   const HilbertOptions& opts) {
    GridFunction h = hilbert_transform(f, opts);
    const double sign = (side == PlemeljSide::Upper) ? 0.5 : -0.5;
    std::vector<Complex> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        out[k] = sign * f.value(k) + h.value(k) / (2.0 * kI);
    }
    return GridFunction(f.x0(), f.spacing(), std::move(out));
}

std::pair<GridFunction, GridFunction> direct_factor_from_g(const GridFunction& g) {
    const std::size_t n = g.size();
    std::vector<double> gr(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex v = g.value(k);
        if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real()))) {
            throw DomainError("direct_factor_from_g: g must be real-valued");
        }
        if (v.real() <= 0.0) throw DomainError("direct_factor_from_g: g must be strictly positive");
        if (v.real() > 1.0 + 1e-9) throw DomainError("direct_factor_from_g: g must be bounded by 1");
        gr[k] = v.real();
    }
    const Complex g0 = g.interpolate(0.0);
    if (std::abs(g0 - 1.0) > 1e-9) {
        throw DomainError("direct_factor_from_g: g(0) must equal 1");
    }

    // ln g = a + b ln(1+w^2) + rem, with (a, b) fitted on the outer 10% of
    // nodes so that rem decays and the spectral transform sees a localized
    // function.  H[a] = 0 and H[b ln(1+x^2)] = 2 b atan(w).
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = std::log(gr[k]);

    const std::size_t edge = std::max<std::size_t>(2, n / 10);
    double s_ll = 0.0, s_l = 0.0, s_ul = 0.0, s_u = 0.0;
    double count = 0.0;
    auto accumulate = [&](std::size_t k) {
        const double w = g.node(k);
        const double L = std::log1p(w * w);
        s_ll += L * L;
        s_l += L;
        s_ul += u[k] * L;
        s_u += u[k];
        count += 1.0;
    };
    for (std::size_t k = 0; k < edge; ++k) accumulate(k);
    for (std::size_t k = n - edge; k < n; ++k) accumulate(k);
    const double det = count * s_ll - s_l * s_l;
    double a = 0.0, b = 0.0;
    if (std::abs(det) > 1e-14 * (1.0 + count * s_ll)) {
        b = (count * s_ul - s_l * s_u) / det;
        a = (s_u - b * s_l) / count;
    }

    std::vector<Complex> rem(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = g.node(k);
        rem[k] = Complex(u[k] - a - b * std::log1p(w * w), 0.0);
    }
    GridFunction rem_grid(g.x0(), g.spacing(), std::move(rem));
    HilbertOptions opts;
    opts.check_decay = false;
    GridFunction h_rem = hilbert_transform(rem_grid, opts);

    std::vector<Complex> h_u(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = g.node(k);
        h_u[k] = h_rem.value(k) + 2.0 * b * std::atan(w);
    }
    GridFunction h_grid(g.x0(), g.spacing(), std::move(h_u));
    const Complex h0 = h_grid.interpolate(0.0);

    std::vector<Complex> plus(n), minus(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double root = std::sqrt(gr[k]);
        const Complex arg = 0.5 * kI * (h0 - h_grid.value(k));
        plus[k] = root * std::exp(arg);
        minus[k] = root * std::exp(-arg);
    }
    return {GridFunction(g.x0(), g.spacing(), std::move(plus)),
            GridFunction(g.x0(), g.spacing(), std::move(minus))};
}

Complex plemelj_integral(const GridFunction& f, Complex lambda) {
    if (lambda.imag() == 0.0) {
        // radial mean of the two limits: H_f/(2i)
        HilbertOptions opts;
        opts.check_decay = false;
        GridFunction h = hilbert_transform(f, opts);
        return h.interpolate(lambda.real()) / (2.0 * kI);
    }
    Complex acc(0.0, 0.0);
    const std::size_t n = f.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        acc += w * f.value(k) / (f.node(k) - lambda);
    }
    acc *= f.spacing();
    return acc / (2.0 * std::numbers::pi * kI);
}

double resolvent_selftest(const GridFunction& f, Complex lambda, Complex mu) {
    if (lambda == mu) return 0.0;
    const Complex lhs = plemelj_integral(f, lambda) - plemelj_integral(f, mu);

    std::vector<Complex> weighted(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        weighted[k] = f.value(k) / (f.node(k) - lambda);
    }
    GridFunction fw(f.x0(), f.spacing(), std::move(weighted));
    const Complex rhs = (lambda - mu) * plemelj_integral(fw, mu);
    return std::abs(lhs - rhs);
}

}  // namespace levx
