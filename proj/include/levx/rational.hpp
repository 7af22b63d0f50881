#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levx/grid.hpp"
#include "levx/levy.hpp"

namespace levx {

// ---------------------------------------------------------------------------
// Positive-definite rational basis (classes D and D*)
// ---------------------------------------------------------------------------

enum class BasisForm { R1, R2, R3, R4 };

// r1 = 1/(iw+b)            pole  ib   (upper half-plane)
// r2 = 1/(-iw+b)           pole -ib   (lower half-plane)
// r3 = 1/((iw+b)((iw+b)^2+a^2))       poles ib, +-a+ib
// r4 = 1/((-iw+b)((-iw+b)^2+a^2))     poles -ib, +-a-ib
// power j >= 1 raises the whole form (class D); class D* admits only
// first-power r1/r2 terms.
struct BasisTerm {
    BasisForm form = BasisForm::R1;
    double rate = 1.0;   // b > 0
    double osc = 0.0;    // a > 0, r3/r4 only
    int power = 1;       // j >= 1

    void validate() const;
    bool dstar_admissible() const;
    Complex eval(Complex w) const;
    // poles of the (unpowered) form in the w-plane; multiplicity = power
    std::vector<Complex> form_poles() const;
};

enum class RationalClass { D, DStar };

// A0 + sum C_t * term_t(w) with A0, C_t >= 0: positive-definite by construction.
struct RationalApproximant {
    double a0 = 0.0;
    std::vector<std::pair<BasisTerm, double>> terms;
    RationalClass cls = RationalClass::D;

    void validate() const;
    Complex eval(Complex w) const;
};

// ---------------------------------------------------------------------------
// Pole discovery
// ---------------------------------------------------------------------------

struct Pole {
    Complex location;
    int multiplicity = 1;
};

// Poles split by half-plane.  Off-axis poles come in (a+bi, -a+bi) pairs; the
// mirror of every off-axis entry must itself be an entry.
struct PoleSet {
    std::vector<Pole> upper;
    std::vector<Pole> lower;

    void validate() const;
    std::size_t group_count() const;  // conjugate pair = one group
    std::vector<Pole> all() const;
    bool empty() const { return upper.empty() && lower.empty(); }
};

// Search region: the imaginary-axis segment [im_min, im_max] is scanned
// directly; off-axis zeros are located by argument-principle subdivision on
// [re_margin, re_max] x [im_min, im_max] and mirrored.
struct SearchRegion {
    double im_min = -12.0;
    double im_max = 12.0;
    double re_max = 12.0;
    double re_margin = 0.05;
    int axis_samples = 20000;
    int max_depth = 12;
};

using DenominatorFn = std::function<Complex(Complex)>;

// The N pole groups of smallest modulus of the stopped CF (zeros of the
// stopping denominator).  Axis scan first, then argument-principle cells for
// off-axis pairs; every pole is Newton-polished to |den| < 1e-9 and mirror
// symmetry is enforced.
PoleSet find_poles(const LevyModel& model, const StoppingTime& stop,
                   const SearchRegion& region, std::size_t count);
PoleSet find_poles(const DenominatorFn& denominator, const SearchRegion& region,
                   std::size_t count);

// ---------------------------------------------------------------------------
// Basis construction and fitting
// ---------------------------------------------------------------------------

// Upper axis pole ib -> r1(rate b), lower -ib -> r2(rate b); multiplicity m
// contributes powers 1..m in class D.  Off-axis pairs map to r3/r4 (class D)
// or to first-order terms with the |imaginary part| as rate (class D*).
std::vector<BasisTerm> basis_from_poles(const PoleSet& poles, RationalClass cls);

struct FitOptions {
    double coefficient_prune = 0.0;  // drop fitted C below this
    int max_iterations = 10000;      // projected-gradient cap for p < 2
    double tolerance = 1e-10;
};

struct FitResult {
    RationalApproximant approximant;
    double a0 = 0.0;
    std::vector<std::string> warnings;
};

// A0 from the tail of |h| (0 unless the tail has levelled off), then
// nonnegative least squares on the grid samples; p < 2 refines the p = 2
// solution by projected gradient descent.
FitResult fit_coefficients(const GridFunction& h_samples, const std::vector<BasisTerm>& basis,
                           const NormOrder& order, const FitOptions& opts = {});

// lp_norm of (h - r) sampled on the grid.
double fit_error(const GridFunction& h_samples, const RationalApproximant& r,
                 const NormOrder& order);

// Tail estimate of lim |h| used for A0 (exposed for tests).
double estimate_a0(const GridFunction& h_samples);

}  // namespace levx
