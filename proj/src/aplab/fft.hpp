#pragma once

#include <vector>

#include "aplab/common.hpp"

namespace aplab::fft {

// Discrete Fourier transform of arbitrary length n >= 1:
//   X[k] = sum_j x[j] * e(sign * j*k / n)
// Power-of-two lengths use an iterative radix-2 transform; everything else
// goes through Bluestein's chirp-z reduction to a power-of-two convolution,
// so prime lengths (and q-1 for prime q) cost O(n log n).
std::vector<cplx> dft(const std::vector<cplx>& x, int sign);

// In-place radix-2 transform; n must be a power of two.
void pow2_inplace(std::vector<cplx>& a, int sign);

// d-fold cyclic self-convolution of c (length preserved).
std::vector<cplx> cyclic_power(const std::vector<cplx>& c, unsigned d);

}  // namespace aplab::fft
