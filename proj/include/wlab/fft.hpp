#pragma once

#include <vector>

#include "wlab/common.hpp"

namespace wlab {

// In-place radix-2 complex FFT. sign = -1 computes sum a[n] e(-jn/N) (forward),
// sign = +1 the conjugate transform. No 1/N normalization. N must be a power
// of two.
void fft_pow2(std::vector<cplx>& a, int sign);

// DFT of arbitrary length n via Bluestein's chirp transform:
//   out[m] = sum_{j<n} in[j] * e(sign * j*m / n).
// Quadratic phases are reduced mod 2n in exact integer arithmetic.
std::vector<cplx> dft_any(const std::vector<cplx>& in, int sign);

// Cyclic convolution of two real sequences of equal length n (any n >= 1).
std::vector<double> cyclic_convolve(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace wlab
