#pragma once

#include <complex>
#include <vector>

namespace levx {

// Dense real-coefficient polynomial, coefficients in ascending order.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    static Polynomial constant(double c) { return Polynomial({c}); }
    // (c0 + c1 x), monic linear helper
    static Polynomial linear(double c0, double c1) { return Polynomial({c0, c1}); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double leading() const { return coeffs_.back(); }
    bool is_zero() const;

    std::complex<double> eval(std::complex<double> x) const;
    double eval(double x) const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double s) const;

    void trim(double tol = 0.0);

private:
    std::vector<double> coeffs_;
};

// All complex roots via Aberth-Ehrlich iteration with Newton polish.
// Throws NumericalError if the iteration does not settle.
std::vector<std::complex<double>> polynomial_roots(const Polynomial& p);

}  // namespace levx
