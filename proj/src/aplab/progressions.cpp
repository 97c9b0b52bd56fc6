#include "aplab/progressions.hpp"

#include "aplab/bilinear.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

namespace aplab {

namespace {

// Per-residue smoothed sums over n in [X, 2X]; entry q holds the unit total.
std::vector<double> residue_sums(const CoefficientSeries& lam, double X, const CtxPtr& ctx,
                                 const TestFunction& V) {
  const std::uint64_t q = ctx->q();
  const std::uint64_t n_lo = static_cast<std::uint64_t>(std::max(1.0, std::floor(X)));
  const std::uint64_t n_hi = static_cast<std::uint64_t>(std::ceil(2.0 * X));
  require(lam.N >= n_hi, errc::invalid_argument,
          "series too short: need " + std::to_string(n_hi) + " coefficients, have " +
              std::to_string(lam.N));
  std::vector<KahanSum> bucket(q);
  KahanSum units;
  for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
    const double w = lam.vals[n] * V(static_cast<double>(n) / X);
    if (w == 0.0) continue;
    const std::uint64_t r = n % q;
    bucket[r].add(w);
    if (r != 0) units.add(w);
  }
  std::vector<double> out(q + 1);
  for (std::uint64_t r = 0; r < q; ++r) out[r] = bucket[r].value();
  out[q] = units.value();
  return out;
}

double pow4_over(double q, double X) { return q * q * q * q / X; }

}  // namespace

DiscrepancyReport progression_discrepancy(const CoefficientSeries& lam, double X, std::uint64_t a,
                                          const CtxPtr& ctx, const TestFunction& V) {
  const std::uint64_t q = ctx->q();
  require(ctx->is_unit(a), errc::invalid_argument, "residue class a must be a unit mod q");
  const std::vector<double> sums = residue_sums(lam, X, ctx, V);
  DiscrepancyReport rep;
  rep.X = X;
  rep.q = q;
  rep.a = a % q;
  rep.delta = sums[a % q] - sums[q] / static_cast<double>(q - 1);
  rep.trivial = X / static_cast<double>(q);
  rep.ratio = std::abs(rep.delta) / rep.trivial;
  rep.series_label = lam.label;
  return rep;
}

std::vector<DiscrepancyReport> discrepancy_all_units(const CoefficientSeries& lam, double X,
                                                     const CtxPtr& ctx, const TestFunction& V) {
  const std::uint64_t q = ctx->q();
  const std::vector<double> sums = residue_sums(lam, X, ctx, V);
  const double average = sums[q] / static_cast<double>(q - 1);
  std::vector<DiscrepancyReport> out;
  out.reserve(q - 1);
  for (std::uint64_t a = 1; a < q; ++a) {
    DiscrepancyReport rep;
    rep.X = X;
    rep.q = q;
    rep.a = a;
    rep.delta = sums[a] - average;
    rep.trivial = X / static_cast<double>(q);
    rep.ratio = std::abs(rep.delta) / rep.trivial;
    rep.series_label = lam.label;
    out.push_back(std::move(rep));
  }
  return out;
}

std::string discrepancy_csv(const std::vector<DiscrepancyReport>& rows) {
  std::ostringstream os;
  os.precision(17);
  if (!rows.empty()) os << "# series=" << rows.front().series_label << "\n";
  os << "X,q,a,delta,trivial,ratio\n";
  for (const auto& r : rows)
    os << r.X << ',' << r.q << ',' << r.a << ',' << r.delta << ',' << r.trivial << ',' << r.ratio
       << '\n';
  return os.str();
}

DualEvaluators::DualEvaluators(const DualSuite& suite, std::uint64_t q, double X,
                               std::uint64_t n_budget)
    : even(suite.even, X / std::pow(static_cast<double>(q), 4.0),
           std::max(2.0, static_cast<double>(n_budget)) * X / std::pow(static_cast<double>(q), 4.0)),
      odd(suite.odd, X / std::pow(static_cast<double>(q), 4.0),
          std::max(2.0, static_cast<double>(n_budget)) * X / std::pow(static_cast<double>(q), 4.0)) {}

namespace {

// 1 on [0, N/2], smooth descent to 0 at N.
double top_octave_window(std::uint64_t n, std::uint64_t N) {
  const double half = 0.5 * static_cast<double>(N);
  return 1.0 - smooth_step((static_cast<double>(n) - half) / half);
}

struct WindowedPair {
  cplx kloosterman;
  cplx correction;
};

WindowedPair windowed_dual_sums(DualVariant variant, std::uint64_t N, double X, std::uint64_t a,
                                const CtxPtr& ctx, const CoefficientSeries& lam_box,
                                const TraceTable& kl4, const DualEvaluators& eval) {
  const std::uint64_t q = ctx->q();
  const double dual_scale = pow4_over(static_cast<double>(q), X);  // q^4 / X
  KahanSumC kl_acc, corr_acc;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const double lam_n = lam_box.vals[n];
    if (lam_n == 0.0) continue;
    const double window = top_octave_window(n, N);
    if (window == 0.0) continue;
    const double y = static_cast<double>(n) / dual_scale;
    const std::uint64_t an = ctx->mul(a % q, n % q);
    const double w_even = eval.even.real_value(y);
    if (an != 0) {
      if (variant == DualVariant::single_parity) {
        kl_acc.add(window * lam_n * kl4.at(an) * w_even);
      } else {
        const cplx k_plus = kl4.at(an);
        const cplx k_minus = kl4.at(q - an);
        const double w_odd = eval.odd.real_value(y);
        kl_acc.add(window * lam_n *
                   (0.5 * (k_plus + k_minus) * w_even + 0.5 * (k_plus - k_minus) * w_odd));
      }
    }
    // the constant piece of the collapsed character sum keeps the
    // coprimality of the derivation
    if (n % q != 0) corr_acc.add(window * lam_n * w_even);
  }
  return {kl_acc.value(), corr_acc.value()};
}

}  // namespace

DualSideResult dual_side(DualVariant variant, double X, std::uint64_t a, const CtxPtr& ctx,
                         const DualSuite& suite, const CoefficientSeries& lam_box,
                         const TraceTable& kl4, const DualEvaluators& eval,
                         const DualSideOptions& opt) {
  const std::uint64_t q = ctx->q();
  require(ctx->is_unit(a), errc::invalid_argument, "residue class a must be a unit mod q");
  const double phi = static_cast<double>(q - 1);

  DualSideResult res;

  // main term over the support of V
  {
    const std::uint64_t n_lo = static_cast<std::uint64_t>(std::max(1.0, std::floor(X)));
    const std::uint64_t n_hi = static_cast<std::uint64_t>(std::ceil(2.0 * X));
    require(lam_box.N >= n_hi, errc::invalid_argument, "series too short for the direct sum");
    KahanSum acc;
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
      if (n % q == 0) continue;
      acc.add(lam_box.vals[n] * suite.V(static_cast<double>(n) / X));
    }
    res.main_term = acc.value() / phi;
  }

  const double kl_scale = X / std::pow(static_cast<double>(q), 2.5);
  const double corr_scale = X / (std::pow(static_cast<double>(q), 4.0) * phi);

  WindowedPair sums{};
  if (opt.fixed_n != 0) {
    res.n_used = std::min<std::uint64_t>(opt.fixed_n, lam_box.N);
    sums = windowed_dual_sums(variant, res.n_used, X, a, ctx, lam_box, kl4, eval);
    res.stabilization = 0.0;
  } else {
    const std::uint64_t budget = std::min<std::uint64_t>(opt.n_budget, lam_box.N);
    std::uint64_t N = std::min<std::uint64_t>(budget, 1u << 12);
    WindowedPair prev = windowed_dual_sums(variant, N, X, a, ctx, lam_box, kl4, eval);
    double gap = std::numeric_limits<double>::infinity();
    while (N < budget) {
      const std::uint64_t next = std::min<std::uint64_t>(budget, 2 * N);
      const WindowedPair cur = windowed_dual_sums(variant, next, X, a, ctx, lam_box, kl4, eval);
      gap = std::abs(kl_scale * (cur.kloosterman - prev.kloosterman)) +
            std::abs(corr_scale * (cur.correction - prev.correction));
      prev = cur;
      N = next;
      if (gap <= opt.stab_tol) break;
    }
    sums = prev;
    res.n_used = N;
    res.stabilization = gap;
  }
  res.kloosterman_term = kl_scale * sums.kloosterman;
  res.correction_term = -corr_scale * sums.correction;

  // envelope certificate at the truncation point (weak when the decay is
  // slow; reported alongside the measured stabilization)
  const double y_cut = static_cast<double>(res.n_used) / pow4_over(static_cast<double>(q), X);
  double max_abs_lambda = 0.0;
  for (std::uint64_t n = 1; n <= res.n_used; ++n)
    max_abs_lambda = std::max(max_abs_lambda, std::abs(lam_box.vals[n]));
  const double per_sum =
      std::max(suite.even.tail_envelope_bound(y_cut), suite.odd.tail_envelope_bound(y_cut));
  res.tail_estimate = (kl_scale * 4.0 + corr_scale) * max_abs_lambda *
                      (pow4_over(static_cast<double>(q), X) + 1.0) * per_sum;
  return res;
}

FunceqReport verify_functional_identity(double X, std::uint64_t a, const CtxPtr& ctx,
                                        const DualSuite& suite, const CoefficientSeries& lam_box,
                                        const TraceTable& kl4, const DualEvaluators& eval,
                                        const DualSideOptions& opt) {
  const std::uint64_t q = ctx->q();
  require(ctx->is_unit(a), errc::invalid_argument, "residue class a must be a unit mod q");

  FunceqReport rep;
  rep.q = q;
  rep.X = X;
  rep.a = a % q;

  {
    const std::uint64_t n_lo = static_cast<std::uint64_t>(std::max(1.0, std::floor(X)));
    const std::uint64_t n_hi = static_cast<std::uint64_t>(std::ceil(2.0 * X));
    require(lam_box.N >= n_hi, errc::invalid_argument, "series too short for the direct sum");
    KahanSum acc;
    for (std::uint64_t n = n_lo + ((rep.a + q - n_lo % q) % q); n <= n_hi; n += q)
      acc.add(lam_box.vals[n] * suite.V(static_cast<double>(n) / X));
    rep.lhs = acc.value();
  }

  const auto run_variant = [&](DualVariant variant) {
    const DualSideResult side = dual_side(variant, X, a, ctx, suite, lam_box, kl4, eval, opt);
    FunceqVariantResult out;
    out.rhs = side.total();
    out.residual = std::abs(rep.lhs - out.rhs);
    out.residual_rel = out.residual / std::max(std::abs(rep.lhs), 1e-300);
    rep.tail_estimate = std::max(rep.tail_estimate, side.tail_estimate);
    rep.n_used = std::max(rep.n_used, side.n_used);
    rep.stabilization = std::max(rep.stabilization, side.stabilization);
    return out;
  };
  rep.single_parity = run_variant(DualVariant::single_parity);
  rep.parity_split = run_variant(DualVariant::parity_split);
  return rep;
}

std::string funceq_csv(const std::vector<FunceqReport>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "# variant_a=single-kappa variant_b=parity-split\n";
  os << "q,X,a,lhs,rhs_variant_a,rhs_variant_b,residual_a,residual_b\n";
  for (const auto& r : rows)
    os << r.q << ',' << r.X << ',' << r.a << ',' << r.lhs.real() << ','
       << r.single_parity.rhs.real() << ',' << r.parity_split.rhs.real() << ','
       << r.single_parity.residual << ',' << r.parity_split.residual << '\n';
  return os.str();
}

double functional_identity_average(DualVariant variant, double X, const CtxPtr& ctx,
                                   const DualSuite& suite, const CoefficientSeries& lam_box,
                                   const TraceTable& kl4, const DualEvaluators& eval,
                                   std::uint64_t fixed_n) {
  const std::uint64_t q = ctx->q();
  DualSideOptions opt;
  opt.fixed_n = fixed_n;  // one shared truncation, so the a-average cancels exactly
  KahanSum acc;
  for (std::uint64_t a = 1; a < q; ++a) {
    const FunceqReport rep = verify_functional_identity(X, a, ctx, suite, lam_box, kl4, eval, opt);
    const cplx rhs =
        variant == DualVariant::single_parity ? rep.single_parity.rhs : rep.parity_split.rhs;
    acc.add((rep.lhs - rhs).real());
  }
  return std::abs(acc.value());
}

LevelScanResult level_scan(const CoefficientSeries& lam, const std::vector<double>& Xs,
                           const std::vector<double>& thetas, unsigned samples, std::uint64_t seed,
                           const TestFunction& V) {
  require(samples >= 1, errc::invalid_argument, "level_scan: samples must be >= 1");
  LevelScanResult scan;
  scan.samples = samples;
  scan.seed = seed;
  for (double X : Xs) {
    require(X >= 2.0, errc::invalid_argument, "level_scan: X must be >= 2");
    if (lam.N < static_cast<std::uint64_t>(std::ceil(2.0 * X))) {
      scan.notes.push_back("skipped X=" + std::to_string(X) + ": series too short");
      continue;
    }
    for (double theta : thetas) {
      const double target = std::floor(std::pow(X, theta));
      const std::uint64_t q = next_prime_at_least(
          std::max<std::uint64_t>(3, static_cast<std::uint64_t>(target)));
      CtxPtr ctx;
      try {
        ctx = PrimeContext::create(q);
      } catch (const Error& e) {
        scan.notes.push_back("skipped X=" + std::to_string(X) + " theta=" + std::to_string(theta) +
                             ": " + e.what());
        continue;
      }
      // reproducible class sample, one stream per (X, theta)
      Rng rng(seed ^ (q * 0x9e3779b97f4a7c15ull) ^ static_cast<std::uint64_t>(theta * (1 << 20)));
      std::vector<std::uint64_t> classes;
      if (q - 1 <= samples) {
        for (std::uint64_t a = 1; a < q; ++a) classes.push_back(a);
      } else {
        while (classes.size() < samples) {
          const std::uint64_t a = 1 + rng.below(q - 1);
          if (std::find(classes.begin(), classes.end(), a) == classes.end()) classes.push_back(a);
        }
        std::sort(classes.begin(), classes.end());
      }
      const std::vector<double> sums = residue_sums(lam, X, ctx, V);
      const double average = sums[q] / static_cast<double>(q - 1);
      for (std::uint64_t a : classes) {
        LevelScanRow row;
        row.X = X;
        row.theta = theta;
        row.q = q;
        row.a = a;
        row.delta = sums[a] - average;
        row.trivial = X / static_cast<double>(q);
        row.ratio = std::abs(row.delta) / row.trivial;
        scan.rows.push_back(row);
      }
    }
  }
  return scan;
}

std::string level_scan_csv(const LevelScanResult& scan) {
  std::ostringstream os;
  os.precision(17);
  os << "# level-of-distribution scan over progressions mod q ~ X^theta\n";
  os << "# theta4=" << 2.0 / 5.0 << " thetaf=" << 21.0 / 52.0
     << " (reference exponents 2/5 and 21/52)\n";
  os << "# samples=" << scan.samples << " seed=" << scan.seed << "\n";
  for (const auto& note : scan.notes) os << "# " << note << "\n";
  os << "X,theta,q,a,delta,trivial,ratio\n";
  for (const auto& r : scan.rows)
    os << r.X << ',' << r.theta << ',' << r.q << ',' << r.a << ',' << r.delta << ',' << r.trivial
       << ',' << r.ratio << '\n';
  return os.str();
}

}  // namespace aplab
