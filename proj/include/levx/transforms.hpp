#pragma once

#include <utility>

#include "levx/grid.hpp"

namespace levx {

enum class PlemeljSide { Upper, Lower };

struct HilbertOptions {
    // Cosine taper over the outer 5% of the grid before the spectral step.
    bool taper = true;
    double taper_fraction = 0.05;
    // Reject inputs whose end samples are not small relative to the peak.
    bool check_decay = true;
    double decay_tol = 1e-3;
};

// Hilbert transform with the convention H_s(w) = (1/pi) p.v. int s(x)/(x-w) dx,
// fixed so that H[1/(1+x^2)] = -x/(1+x^2).  Spectral implementation:
// multiplier +i sign(k) on the forward transform, DC and Nyquist bins zeroed.
GridFunction hilbert_transform(const GridFunction& f, const HilbertOptions& opts = {});

// Radial limits of the Sokhotskyi-Plemelj integral: phi_± = ±f/2 + H_f/(2i).
GridFunction plemelj_radial_limits(const GridFunction& f, PlemeljSide side,
                                   const HilbertOptions& opts = {});

// Half-plane factors of a real positive g with g(0)=1 and g <= 1:
//   Phi_±(w) = sqrt(g) exp{ ±(i/2) (H_{ln g}(0) - H_{ln g}(w)) }.
// Logarithmic tails of ln g are split off against a + b*ln(1+w^2), whose
// transform is known in closed form (H[ln(1+x^2)] = 2 atan(w)), so slowly
// decaying g (any rational-type tail) stays accurate.
std::pair<GridFunction, GridFunction> direct_factor_from_g(const GridFunction& g);

// |LHS - RHS| of the resolvent identity
//   phi_f(lambda) - phi_f(mu) = (lambda - mu) phi_{f(x)/(x-lambda)}(mu)
// evaluated by trapezoid quadrature on the grid.  Points on the real axis use
// the radial-mean value H_f/(2i).
double resolvent_selftest(const GridFunction& f, Complex lambda, Complex mu);

// Sokhotskyi-Plemelj integral phi_f(lambda) by quadrature (lambda off the real
// axis, or on it via the averaged limit).
Complex plemelj_integral(const GridFunction& f, Complex lambda);

}  // namespace levx
