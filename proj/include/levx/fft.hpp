#pragma once

#include <complex>
#include <vector>

namespace levx {

// In-place radix-2 FFT, forward convention X_k = sum_n x_n e^{-2pi i nk/N}.
// N must be a power of two.
void fft(std::vector<std::complex<double>>& data);
// Inverse transform including the 1/N factor.
void ifft(std::vector<std::complex<double>>& data);

}  // namespace levx
