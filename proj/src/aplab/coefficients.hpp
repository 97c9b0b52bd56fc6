#pragma once

#include <string>
#include <vector>

#include "aplab/common.hpp"

namespace aplab {

enum class Normalization { arithmetic, unitary };

// An arithmetic function n -> lambda(n) for 1 <= n <= N. Arithmetic series
// carry exact integers (mirrored into doubles); unitary series carry doubles.
// Entries are addressed by n directly; index 0 is unused.
struct CoefficientSeries {
  std::uint64_t N = 0;
  Normalization norm = Normalization::unitary;
  std::string label;
  std::vector<i128> ints;    // size N+1 when arithmetic, else empty
  std::vector<double> vals;  // size N+1

  double value(std::uint64_t n) const { return vals[n]; }
  i128 integer(std::uint64_t n) const { return ints[n]; }
  bool is_arithmetic() const { return norm == Normalization::arithmetic; }
};

// Ramanujan tau via the weight-12 cusp form expansion: the pentagonal-number
// series for prod(1-x^m) raised to the 24th power by square-and-multiply,
// with exact integer coefficients throughout.
CoefficientSeries ramanujan_tau(std::uint64_t N);

// lambda_f(n) = tau(n) / n^{11/2}. Lengths beyond the exact-integer budget
// switch to a residue-reconstructed floating path (same transform chain, the
// final product rounded to long double), good to ~1e-17 relative.
CoefficientSeries hecke_normalized(std::uint64_t N);
CoefficientSeries hecke_normalized(const CoefficientSeries& tau);
CoefficientSeries hecke_normalized_rounded(std::uint64_t N);

// Symmetric-square coefficients, built from the degree-3 Euler factor at each
// prime and assembled multiplicatively; cross-checked on n <= 10^4 against the
// divisor-sum formula sum_{d^2 m = n} lambda_f(m^2) and aborted on mismatch.
CoefficientSeries sym2_series(std::uint64_t N);
CoefficientSeries sym2_series(const CoefficientSeries& hecke);

CoefficientSeries mobius(std::uint64_t N);

CoefficientSeries dirichlet_convolve(const CoefficientSeries& a, const CoefficientSeries& b,
                                     std::uint64_t N, const std::string& label);

// 1 * lambda_pi: partial sums over divisors.
CoefficientSeries one_boxplus(const CoefficientSeries& lam_pi, std::uint64_t N);

// lambda_f(n)^2 (unitary).
CoefficientSeries rankin_selberg_series(std::uint64_t N);
CoefficientSeries rankin_selberg_series(const CoefficientSeries& hecke);

// max_{n<=N} | lambda_f(n)^2 - sum_{d^2 k = n} mu(d) (1 * lambda_sym2)(k) |
double verify_convolution_identity(std::uint64_t N);

// Same identity at a generic prime: with t an indeterminate standing for
// lambda_f(p), checks lambda_f(p^j)^2 = c_j(t) + c_{j-1}(t) exactly in Z[t]
// for all j <= jmax, where c_j is the local symmetric-square coefficient.
bool verify_convolution_symbolic(unsigned jmax);

struct RankinSelbergRow {
  double x;
  double ratio;  // sum_{m<=x} lambda_sym2(m)^2 / x
};
std::vector<RankinSelbergRow> rankin_selberg_report(double X);

}  // namespace aplab
