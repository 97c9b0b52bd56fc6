#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aplab/archimedean.hpp"
#include "aplab/coefficients.hpp"
#include "aplab/exp_sums.hpp"

namespace aplab {

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);

// Half-octave partition of unity. ramp rises from 0 to 1 on [1, sqrt(2)];
// bump(u) = ramp(u) - ramp(u/sqrt(2)) is supported on [1, 2], and
// sum_{j >= -2} bump(x / 2^{j/2}) = 1 for every x >= 1.
double dyadic_ramp(double u);
double dyadic_bump(double u);
double dyadic_weight(int j, double x);
// Indices whose support [2^{j/2}, 2^{(j+2)/2}] meets [xmin, xmax].
std::vector<int> dyadic_active_indices(double xmin, double xmax);

using Weight = std::function<double(double)>;

// (X/q^{5/2}) sum_{l,m} lambda(m) Kl_4(a l m; q) V1(l/L) V2(m/M), optionally
// times a pair envelope w(l*m); direct double loop over the supports.
cplx bilinear_sum(double L, double M, std::uint64_t a, const CtxPtr& ctx, double X,
                  const TraceTable& kl4, const CoefficientSeries& lam, const Weight& V1,
                  const Weight& V2, const std::function<double(double)>& pair_envelope = {});

// Finite-data trivial bound for the same cell: the triangle inequality with
// the actual max |Kl_4| and the actual coefficient mass on the support.
double bilinear_trivial_bound(double L, double M, std::uint64_t a, const CtxPtr& ctx, double X,
                              const TraceTable& kl4, const CoefficientSeries& lam,
                              const Weight& V1, const Weight& V2);

// Compares the direct l-sum of Kl_4(a m l) V1(l/L) for every m in the support
// of V2 against its Poisson dual
//   (L/q^{1/2}) sum_{ltilde} [delta Kl_3(-a m / ltilde) + q^{-2}] V1hat(ltilde L / q),
// returning the max residual.
double poisson_l_identity(double L, double M, std::uint64_t a, const CtxPtr& ctx,
                          const TraceTable& kl4, const TraceTable& kl3, const TestFunction& V1,
                          const TestFunction& V2);

struct CsSplitReport {
  double direct = 0.0;        // sum_m |sum_l Kl4 V1|^2 V2
  double diagonal = 0.0;      // l1 = l2 piece, summed directly
  cplx off_diagonal;          // l1 != l2 piece via Poisson in m and C_a
  double reassembly = 0.0;    // |direct - diagonal - off_diagonal|
  double diag_shape = 0.0;    // L*M reference
  double offdiag_shape = 0.0; // L^2 sqrt(q) reference
};

CsSplitReport cauchy_schwarz_split(double L, double M, std::uint64_t a, const CtxPtr& ctx,
                                   const TraceTable& kl4, const TestFunction& V1,
                                   const TestFunction& V2);

enum class RegimeCase { trivial, cauchy_schwarz, poisson_l, klms, cauchy_schwarz_high };

std::string regime_case_name(RegimeCase c);

// The five-way (L, M) case split at parameters (q, X, eta), with L0 = X^{1/52}
// and thresholds q^{4/3} and q^{8/15+eta}. Total and exclusive by
// construction: ties resolve to the first matching case in the order
// trivial, cauchy-schwarz, poisson-l on the M-low side and klms,
// cauchy-schwarz-high on the M-high side.
RegimeCase classify_regime(double L, double M, double q, double X, double eta);

// The matching bound shape with implied constants set to 1.
double regime_envelope(RegimeCase c, double L, double M, double q, double X);

struct RegimeScanRow {
  double L = 0.0;
  double M = 0.0;
  RegimeCase regime = RegimeCase::trivial;
  double abs_sum = 0.0;
  double trivial = 0.0;
  double envelope = 0.0;
};

struct RegimeScanResult {
  std::vector<RegimeScanRow> rows;
  std::vector<std::string> notes;
};

// Dyadic (L, M) grid with LM <= q^4/X; per-cell work capped at
// L*M <= 10^7 (larger cells are skipped with a note).
RegimeScanResult regime_scan(std::uint64_t q, double X, double eta, const CtxPtr& ctx,
                             const CoefficientSeries& lam, const TraceTable& kl4);

std::string regime_scan_csv(const RegimeScanResult& scan);

}  // namespace aplab
