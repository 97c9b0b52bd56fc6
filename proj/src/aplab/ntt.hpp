#pragma once

#include <vector>

#include "aplab/common.hpp"

namespace aplab::ntt {

// Exact product of integer power series, truncated to `trunc` coefficients.
// Coefficients are carried over five 31-bit NTT primes and reconstructed by
// mixed-radix CRT, which is exact as long as every output coefficient fits a
// signed 128-bit integer (the combined modulus is about 7e43).
std::vector<i128> multiply_trunc(const std::vector<i128>& a, const std::vector<i128>& b,
                                 std::size_t trunc);

std::vector<i128> square_trunc(const std::vector<i128>& a, std::size_t trunc);

// Same product, rounded to long double instead of reconstructed exactly; valid
// while coefficients stay below half the combined modulus (~7e52), far beyond
// the signed-128 range. Used for series whose later coefficients outgrow i128
// but are only consumed in floating point.
std::vector<long double> multiply_trunc_rounded(const std::vector<i128>& a,
                                                const std::vector<i128>& b, std::size_t trunc);

}  // namespace aplab::ntt
