#pragma once

#include <string>
#include <vector>

#include "aplab/archimedean.hpp"
#include "aplab/coefficients.hpp"
#include "aplab/exp_sums.hpp"

namespace aplab {

struct DiscrepancyReport {
  double X = 0.0;
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  double delta = 0.0;
  double trivial = 0.0;  // X/q
  double ratio = 0.0;    // |delta| / (X/q)
  std::string series_label;
};

// Smoothed count of lambda(n) in the class a mod q minus the unit average:
//   sum_{n = a mod q} lambda(n) V(n/X) - (1/phi(q)) sum_{(n,q)=1} lambda(n) V(n/X)
DiscrepancyReport progression_discrepancy(const CoefficientSeries& lam, double X, std::uint64_t a,
                                          const CtxPtr& ctx, const TestFunction& V);

// All unit classes in one pass over [X, 2X].
std::vector<DiscrepancyReport> discrepancy_all_units(const CoefficientSeries& lam, double X,
                                                     const CtxPtr& ctx, const TestFunction& V);

std::string discrepancy_csv(const std::vector<DiscrepancyReport>& rows);

// The two dual-side transforms (even and odd twist parity) for one weight and
// one set of archimedean parameters; built once and reused across moduli.
struct DualSuite {
  SpectralData data;
  TestFunction V;
  std::shared_ptr<const MellinNodeCache> cache;  // Mellin nodes shared by both parities
  DualWeight even;
  DualWeight odd;

  DualSuite(const SpectralData& d, const TestFunction& v, DualWeightOptions opt = {})
      : data(d),
        V(v),
        cache(std::make_shared<const MellinNodeCache>(v, opt)),
        even(d, 0, v, cache),
        odd(d, 1, v, cache) {}
};

// How the twist parity is handled on the dual side.
enum class DualVariant {
  single_parity,  // one transform (parity 0) against the full Kl_4 kernel
  parity_split,   // per-parity transforms against even/odd Kl_4 components
};

// Fast transform evaluators over the y-range a dual sum of length n_budget
// touches; built once per (suite, q, X) and shared across classes and
// variants.
struct DualEvaluators {
  DualWeightSampler even;
  DualWeightSampler odd;
  DualEvaluators(const DualSuite& suite, std::uint64_t q, double X, std::uint64_t n_budget);
};

struct DualSideOptions {
  std::uint64_t n_budget = 1u << 23;  // clamped to the series length
  double stab_tol = 1e-6;             // absolute target for the windowed gap
  std::uint64_t fixed_n = 0;          // nonzero: single pass at this length
};

struct DualSideResult {
  cplx main_term;         // (1/phi(q)) sum_{(n,q)=1} lambda(n) V(n/X)
  cplx kloosterman_term;  // (X/q^{5/2}) sum lambda(n) [kernel](an) W(nX/q^4)
  cplx correction_term;   // -(X/(q^4 phi(q))) sum_{(n,q)=1} lambda(n) W(nX/q^4)
  std::uint64_t n_used = 0;
  // change of the windowed sums over the last doubling; the truncation
  // certificate for slowly decaying transforms
  double stabilization = 0.0;
  // decay-envelope bound on the discarded absolute tail (often weak; the
  // stabilization above is the operative certificate)
  double tail_estimate = 0.0;
  cplx total() const { return main_term + kloosterman_term + correction_term; }
};

// The dual sums pair a q-periodic Kloosterman factor against the slowly
// decaying transform, so they converge through oscillation rather than
// absolute smallness. Partial sums are taken with a smooth window over the
// top octave and doubled until they stabilize; both dual terms share one
// window so their exact algebraic cancellations survive truncation.
DualSideResult dual_side(DualVariant variant, double X, std::uint64_t a, const CtxPtr& ctx,
                         const DualSuite& suite, const CoefficientSeries& lam_box,
                         const TraceTable& kl4, const DualEvaluators& eval,
                         const DualSideOptions& opt = {});

struct FunceqVariantResult {
  cplx rhs;
  double residual = 0.0;      // |lhs - rhs|
  double residual_rel = 0.0;  // residual / |lhs|
};

struct FunceqReport {
  std::uint64_t q = 0;
  double X = 0.0;
  std::uint64_t a = 0;
  cplx lhs;
  FunceqVariantResult single_parity;
  FunceqVariantResult parity_split;
  std::uint64_t n_used = 0;
  double stabilization = 0.0;
  double tail_estimate = 0.0;
  // true when the single-transform form wins
  bool single_parity_best() const { return single_parity.residual <= parity_split.residual; }
};

// Computes the progression sum directly and compares it against the dual-side
// expansion under both parity conventions. A large residual is a result, not
// an error.
FunceqReport verify_functional_identity(double X, std::uint64_t a, const CtxPtr& ctx,
                                        const DualSuite& suite, const CoefficientSeries& lam_box,
                                        const TraceTable& kl4, const DualEvaluators& eval,
                                        const DualSideOptions& opt = {});

std::string funceq_csv(const std::vector<FunceqReport>& rows);

// | sum over units a of (lhs(a) - rhs(a)) |; the a-dependence cancels exactly,
// so this measures pure quadrature error.
double functional_identity_average(DualVariant variant, double X, const CtxPtr& ctx,
                                   const DualSuite& suite, const CoefficientSeries& lam_box,
                                   const TraceTable& kl4, const DualEvaluators& eval,
                                   std::uint64_t fixed_n);

struct LevelScanRow {
  double X = 0.0;
  double theta = 0.0;
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  double delta = 0.0;
  double trivial = 0.0;
  double ratio = 0.0;
};

struct LevelScanResult {
  std::vector<LevelScanRow> rows;
  std::vector<std::string> notes;  // skipped combinations, one note each
  unsigned samples = 0;
  std::uint64_t seed = 0;
};

// For each X and theta: q is the least prime >= floor(X^theta), classes a are
// sampled reproducibly from the units, and each row records the discrepancy
// against the trivial bound X/q.
LevelScanResult level_scan(const CoefficientSeries& lam, const std::vector<double>& Xs,
                           const std::vector<double>& thetas, unsigned samples, std::uint64_t seed,
                           const TestFunction& V);

std::string level_scan_csv(const LevelScanResult& scan);

}  // namespace aplab
