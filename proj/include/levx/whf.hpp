#pragma once

#include <utility>
#include <vector>

#include "levx/grid.hpp"
#include "levx/levy.hpp"
#include "levx/rational.hpp"

namespace levx {

enum class ExtremumSide { Supremum, Infimum };

// Rational half-plane factor, stored as roots in the s = i*omega plane where
// all coefficients are real.  A supremum factor has its s-plane poles in the
// right half-plane (omega-plane poles in the lower half-plane), so it is
// analytic and bounded in the upper omega half-plane; mirrored for infimum.
struct HalfPlaneFactor {
    ExtremumSide side = ExtremumSide::Supremum;
    std::vector<Complex> zeros_s;
    std::vector<Complex> poles_s;
    double scale = 1.0;

    Complex eval(Complex w) const;  // omega-plane evaluation
    std::vector<Complex> zeros_omega() const;
    std::vector<Complex> poles_omega() const;
    void validate() const;
};

// Atom at 0 plus a finite mixture of (possibly polynomially weighted,
// possibly oscillatory) exponentials on one half-line.  A term evaluates as
//   coef * m^degree * exp(-rate*m) * cos(freq*m + phase),   m = |x|,
// on the support side; freq = phase = 0 for plain exponential terms.
struct DensityTerm {
    double coef = 0.0;
    double rate = 1.0;
    int degree = 0;
    double freq = 0.0;
    double phase = 0.0;
};

struct ExtremaDensity {
    ExtremumSide side = ExtremumSide::Supremum;
    double atom = 0.0;
    std::vector<DensityTerm> terms;

    double eval(double x) const;          // density part (atom excluded)
    double total_mass() const;            // atom + closed-form integral
    double tail_mass(double a) const;     // mass of {|x| > a} on the support side
    double cdf(double x) const;           // P(extremum <= x), atom included
    double min_rate() const;
};

// Carlemann split of a positive-definite rational approximant: combine over a
// common denominator, factor the numerator, and assign zeros/poles by
// half-plane.  The overall constant is split evenly between the factors.
std::pair<HalfPlaneFactor, HalfPlaneFactor> carlemann_split(const RationalApproximant& r);

struct NormalizedFactors {
    HalfPlaneFactor plus;   // supremum factor, value 1 at 0
    HalfPlaneFactor minus;  // infimum factor, value 1 at 0
    double rescale_plus = 1.0;
    double rescale_minus = 1.0;
};

// Rescales both factors to value exactly 1 at omega = 0 (the CF convention).
NormalizedFactors normalize_factors(const HalfPlaneFactor& plus, const HalfPlaneFactor& minus);

// Truncated interlacing product  prod_{n<=N} (1 +- i w/alpha_n)/(1 +- i w/beta_n).
// ProductSign::Plus builds the (1 + i w/.) form, whose poles lie in the upper
// omega half-plane (an infimum-side factor); Minus mirrors it.
enum class ProductSign { Plus, Minus };
HalfPlaneFactor meromorphic_factor(const std::vector<double>& alphas,
                                   const std::vector<double>& betas, std::size_t n_terms,
                                   ProductSign sign);

// Analytic inversion of a normalized factor: atom from the imaginary-direction
// limit, exponential mixture from partial fractions.
ExtremaDensity density_from_factor(const HalfPlaneFactor& factor);

// Theorem-style factorization bound: 0.5 tan(pi/2p) d^2 + (tan(pi/2p)+0.5) d.
double error_bound_factorization(double delta, const NormOrder& order);

// Compound-Poisson bound on the density error from a jump-measure L2 error:
// exponential: d^2/(q^2 sqrt(8 pi)) + 3 d/(2q); geometric variant scaled by
// (1-q)^2 and (1-q).
double error_bound_compound_poisson(double nu_delta, const StoppingTime& stop);

}  // namespace levx
