#pragma once

#include <complex>
#include <vector>

#include "levx/errors.hpp"

namespace levx {

using Complex = std::complex<double>;

// Norm order p in (1,2] together with its conjugate exponent p* = p/(p-1).
class NormOrder {
public:
    explicit NormOrder(double p);
    double p() const { return p_; }
    double conjugate() const { return conjugate_; }

private:
    double p_;
    double conjugate_;
};

// Complex samples on a uniform frequency grid x_k = x0 + k*dx, k = 0..n-1.
// The node count must be a power of two (spectral Hilbert-transform path) and
// all samples finite.  Grids built with uniform() use the half-open convention
// [a, b) so that 0 is a node whenever the domain is symmetric.
class GridFunction {
public:
    GridFunction(double x0, double dx, std::vector<Complex> values);

    // Validates an explicit node list (uniform spacing to 1e-12 relative).
    static GridFunction from_samples(const std::vector<double>& nodes,
                                     std::vector<Complex> values);

    // n equally spaced nodes on [a, b), n a power of two.
    static GridFunction uniform(double a, double b, std::size_t n);

    std::size_t size() const { return values_.size(); }
    double x0() const { return x0_; }
    double spacing() const { return dx_; }
    double node(std::size_t k) const { return x0_ + static_cast<double>(k) * dx_; }
    std::vector<double> nodes() const;

    const std::vector<Complex>& values() const { return values_; }
    std::vector<Complex>& values() { return values_; }
    Complex value(std::size_t k) const { return values_[k]; }

    // Linear interpolation between the two nearest nodes; exact when x is a node.
    Complex interpolate(double x) const;

    void check_finite() const;

private:
    double x0_;
    double dx_;
    std::vector<Complex> values_;
};

// Discrete l^p norm with the grid measure: (sum |v_k|^p dx)^(1/p).
double lp_norm(const GridFunction& f, const NormOrder& order);

bool is_power_of_two(std::size_t n);

}  // namespace levx
