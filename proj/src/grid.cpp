#include "levx/grid.hpp"

#include <algorithm>
#include <cmath>

namespace levx {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

NormOrder::NormOrder(double p) : p_(p) {
    if (!(p > 1.0 && p <= 2.0)) {
        throw DomainError("NormOrder: p must lie in (1, 2]");
    }
    conjugate_ = p / (p - 1.0);
}

GridFunction::GridFunction(double x0, double dx, std::vector<Complex> values)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
    if (dx_ <= 0.0) throw DomainError("GridFunction: spacing must be positive");
    if (!is_power_of_two(values_.size())) {
        throw DomainError("GridFunction: node count must be a power of two");
    }
    check_finite();
}

GridFunction GridFunction::from_samples(const std::vector<double>& nodes,
                                        std::vector<Complex> values) {
    if (nodes.size() != values.size()) {
        throw DomainError("GridFunction: node/value count mismatch");
    }
    if (nodes.size() < 2) throw DomainError("GridFunction: need at least two nodes");
    const double dx = nodes[1] - nodes[0];
    if (dx <= 0.0) throw DomainError("GridFunction: nodes must be strictly increasing");
    const double scale = std::max(std::abs(nodes.front()), std::abs(nodes.back()));
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        const double step = nodes[k] - nodes[k - 1];
        if (step <= 0.0) throw DomainError("GridFunction: nodes must be strictly increasing");
        if (std::abs(step - dx) > 1e-12 * std::max(1.0, scale)) {
            throw DomainError("GridFunction: nodes must be uniformly spaced");
        }
    }
    return GridFunction(nodes[0], dx, std::move(values));
}

GridFunction GridFunction::uniform(double a, double b, std::size_t n) {
    if (!(b > a)) throw DomainError("GridFunction: empty domain");
    if (!is_power_of_two(n)) throw DomainError("GridFunction: node count must be a power of two");
    const double dx = (b - a) / static_cast<double>(n);
    return GridFunction(a, dx, std::vector<Complex>(n, Complex(0.0, 0.0)));
}

std::vector<double> GridFunction::nodes() const {
    std::vector<double> out(values_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = node(k);
    return out;
}

Complex GridFunction::interpolate(double x) const {
    const double t = (x - x0_) / dx_;
    if (t < 0.0 || t > static_cast<double>(values_.size() - 1)) {
        throw DomainError("GridFunction::interpolate: x outside grid");
    }
    const auto k = static_cast<std::size_t>(t);
    if (k + 1 >= values_.size()) return values_.back();
    const double w = t - static_cast<double>(k);
    return (1.0 - w) * values_[k] + w * values_[k + 1];
}

void GridFunction::check_finite() const {
    for (const auto& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DomainError("GridFunction: values must be finite");
        }
    }
}

double lp_norm(const GridFunction& f, const NormOrder& order) {
    const double p = order.p();
    double acc = 0.0;
    for (const auto& v : f.values()) acc += std::pow(std::abs(v), p);
    return std::pow(acc * f.spacing(), 1.0 / p);
}

}  // namespace levx
