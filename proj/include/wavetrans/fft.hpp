#pragma once

#include <complex>
#include <vector>

namespace wavetrans {

/// In-place radix-2 Cooley-Tukey FFT; size must be a power of two.
/// sign = -1 forward (e^{-i 2 pi k n / N}), +1 inverse (unnormalized).
void fft_radix2(std::vector<std::complex<double>>& data, int sign);

}  // namespace wavetrans
