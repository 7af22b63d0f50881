#pragma once

#include <complex>

namespace levx {

// Modified Bessel function of the third kind K_lambda(z), real order, complex
// argument off the cut arg z = pi.  Temme series for |z| <= 2, Steed's
// continued fraction for |z| > 2, order reduced to |lambda| = n + nu with
// nu in [-1/2, 1/2] followed by upward recurrence.
std::complex<double> bessel_k(double order, std::complex<double> z);

// z*coth(z) with the removable singularity at z = 0 handled by series.
std::complex<double> z_coth_z(std::complex<double> z);

}  // namespace levx
