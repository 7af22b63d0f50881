#include "levx/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levx/errors.hpp"

namespace levx {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    trim();
}

bool Polynomial::is_zero() const {
    return coeffs_.size() == 1 && coeffs_[0] == 0.0;
}

std::complex<double> Polynomial::eval(std::complex<double> x) const {
    std::complex<double> acc(0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Polynomial::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    trim();
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    Polynomial out = *this;
    out += other;
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    std::vector<double> out(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * other.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double s) const {
    std::vector<double> out = coeffs_;
    for (auto& c : out) c *= s;
    return Polynomial(std::move(out));
}

void Polynomial::trim(double tol) {
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= tol) coeffs_.pop_back();
}

std::vector<std::complex<double>> polynomial_roots(const Polynomial& p) {
    using Cplx = std::complex<double>;
    if (p.is_zero()) throw DomainError("polynomial_roots: zero polynomial");
    const int deg = p.degree();
    if (deg == 0) return {};
    const auto& c = p.coeffs();

    // derivative coefficients
    std::vector<double> dc(deg);
    for (int k = 1; k <= deg; ++k) dc[k - 1] = c[k] * k;
    Polynomial dp(dc);

    // Cauchy-style radius bound for the initial circle
    double radius = 0.0;
    for (int k = 0; k < deg; ++k) radius = std::max(radius, std::abs(c[k] / c[deg]));
    radius = 1.0 + radius;

    std::vector<Cplx> z(deg);
    for (int k = 0; k < deg; ++k) {
        const double ang = 2.0 * std::numbers::pi * (k + 0.25) / deg;
        z[k] = 0.7 * radius * Cplx(std::cos(ang), std::sin(ang));
    }

    const int max_iter = 300;
    bool converged = false;
    for (int iter = 0; iter < max_iter && !converged; ++iter) {
        converged = true;
        for (int k = 0; k < deg; ++k) {
            const Cplx pv = p.eval(z[k]);
            if (std::abs(pv) == 0.0) continue;
            const Cplx dv = dp.eval(z[k]);
            Cplx ratio = (std::abs(dv) > 0.0) ? pv / dv : Cplx(1e-8, 1e-8);
            Cplx rep(0.0);
            for (int j = 0; j < deg; ++j) {
                if (j != k) rep += 1.0 / (z[k] - z[j]);
            }
            const Cplx denom = 1.0 - ratio * rep;
            const Cplx step = (std::abs(denom) > 1e-300) ? ratio / denom : ratio;
            z[k] -= step;
            if (std::abs(step) > 1e-14 * (1.0 + std::abs(z[k]))) converged = false;
        }
    }

    // Newton polish and residual check
    for (auto& root : z) {
        for (int it = 0; it < 20; ++it) {
            const Cplx pv = p.eval(root);
            const Cplx dv = dp.eval(root);
            if (std::abs(dv) < 1e-300) break;
            const Cplx step = pv / dv;
            root -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(root))) break;
        }
    }
    double scale = 0.0;
    for (const auto& ck : c) scale = std::max(scale, std::abs(ck));
    for (const auto& root : z) {
        const double res = std::abs(p.eval(root));
        const double local = scale * std::pow(1.0 + std::abs(root), deg);
        if (!(res <= 1e-8 * local)) {
            throw NumericalError("polynomial_roots: root iteration failed to converge "
                                 "(residual " + std::to_string(res) + ")");
        }
    }

    // pair up conjugates exactly for real-coefficient inputs
    for (int k = 0; k < deg; ++k) {
        if (std::abs(z[k].imag()) < 1e-12 * (1.0 + std::abs(z[k]))) {
            z[k] = Cplx(z[k].real(), 0.0);
        }
    }
    return z;
}

}  // namespace levx
