#include "aplab/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aplab {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kCellBudget = 1e7;

// Relative floor below which transform tails are discarded.
constexpr double kHatFloor = 1e-14;

std::uint64_t support_lo(double S) { return static_cast<std::uint64_t>(std::max(1.0, std::floor(S))); }
std::uint64_t support_hi(double S) { return static_cast<std::uint64_t>(std::ceil(2.0 * S)); }

}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double f0 = std::exp(-1.0 / u);
  const double f1 = std::exp(-1.0 / (1.0 - u));
  return f0 / (f0 + f1);
}

double dyadic_ramp(double u) { return smooth_step((u - 1.0) / (kSqrt2 - 1.0)); }

double dyadic_bump(double u) { return dyadic_ramp(u) - dyadic_ramp(u / kSqrt2); }

double dyadic_weight(int j, double x) { return dyadic_bump(x / std::pow(2.0, 0.5 * j)); }

std::vector<int> dyadic_active_indices(double xmin, double xmax) {
  require(xmin > 0.0 && xmax >= xmin, errc::invalid_argument, "bad dyadic range");
  const int j_lo = static_cast<int>(std::floor(2.0 * std::log2(xmin))) - 2;
  const int j_hi = static_cast<int>(std::ceil(2.0 * std::log2(xmax)));
  std::vector<int> out;
  for (int j = j_lo; j <= j_hi; ++j) out.push_back(j);
  return out;
}

cplx bilinear_sum(double L, double M, std::uint64_t a, const CtxPtr& ctx, double X,
                  const TraceTable& kl4, const CoefficientSeries& lam, const Weight& V1,
                  const Weight& V2, const std::function<double(double)>& pair_envelope) {
  require(L >= 1.0 && M >= 1.0, errc::invalid_argument, "bilinear_sum: L, M must be >= 1");
  require(L * M <= kCellBudget, errc::resource_limit, "bilinear_sum: cell exceeds the L*M budget");
  const std::uint64_t q = ctx->q();
  require(ctx->is_unit(a), errc::invalid_argument, "bilinear_sum: a must be a unit");
  const std::uint64_t m_hi = support_hi(M);
  require(lam.N >= m_hi, errc::invalid_argument, "bilinear_sum: series too short");

  const double scale = X / std::pow(static_cast<double>(q), 2.5);
  KahanSumC acc;
  for (std::uint64_t l = support_lo(L); l <= support_hi(L); ++l) {
    const double w1 = V1(static_cast<double>(l) / L);
    if (w1 == 0.0) continue;
    const std::uint64_t al = ctx->mul(a % q, l % q);
    for (std::uint64_t m = support_lo(M); m <= m_hi; ++m) {
      const double w2 = V2(static_cast<double>(m) / M);
      if (w2 == 0.0) continue;
      double w = w1 * w2 * lam.vals[m];
      if (pair_envelope) w *= pair_envelope(static_cast<double>(l) * static_cast<double>(m));
      acc.add(w * kl4.at(ctx->mul(al, m % q)));
    }
  }
  return scale * acc.value();
}

double bilinear_trivial_bound(double L, double M, std::uint64_t a, const CtxPtr& ctx, double X,
                              const TraceTable& kl4, const CoefficientSeries& lam,
                              const Weight& V1, const Weight& V2) {
  (void)a;
  const std::uint64_t q = ctx->q();
  double kl_max = 0.0;
  for (const cplx& v : kl4.values) kl_max = std::max(kl_max, std::abs(v));
  KahanSum l_mass, m_mass;
  for (std::uint64_t l = support_lo(L); l <= support_hi(L); ++l)
    l_mass.add(std::abs(V1(static_cast<double>(l) / L)));
  for (std::uint64_t m = support_lo(M); m <= support_hi(M); ++m)
    m_mass.add(std::abs(lam.vals[m] * V2(static_cast<double>(m) / M)));
  return X / std::pow(static_cast<double>(q), 2.5) * kl_max * l_mass.value() * m_mass.value();
}

namespace {

// Fourier coefficients Vhat(j * S / q) for j = 0, 1, 2, ... until they stay
// below kHatFloor relative to Vhat(0); shared by the Poisson identities.
std::vector<cplx> hat_ladder(const TestFunction& V, double S, std::uint64_t q) {
  std::vector<cplx> out;
  const double base = std::abs(fourier_hat(V, 0.0).real());
  int quiet = 0;
  for (int j = 0;; ++j) {
    const cplx v = fourier_hat(V, static_cast<double>(j) * S / static_cast<double>(q));
    out.push_back(v);
    quiet = std::abs(v) < kHatFloor * base ? quiet + 1 : 0;
    if (quiet >= 3) break;
    require(j < 100000, errc::tolerance_failure, "Fourier tail refuses to decay");
  }
  return out;
}

}  // namespace

double poisson_l_identity(double L, double M, std::uint64_t a, const CtxPtr& ctx,
                          const TraceTable& kl4, const TraceTable& kl3, const TestFunction& V1,
                          const TestFunction& V2) {
  const std::uint64_t q = ctx->q();
  require(ctx->is_unit(a), errc::invalid_argument, "poisson_l_identity: a must be a unit");
  require(L * M <= kCellBudget, errc::resource_limit, "poisson_l_identity: cell budget");

  const std::vector<cplx> hat = hat_ladder(V1, L, q);
  const double qm2 = 1.0 / (static_cast<double>(q) * static_cast<double>(q));
  const double poisson_scale = L / std::sqrt(static_cast<double>(q));

  double max_resid = 0.0;
  for (std::uint64_t m = support_lo(M); m <= support_hi(M); ++m) {
    if (V2(static_cast<double>(m) / M) == 0.0) continue;
    const std::uint64_t am = ctx->mul(a % q, m % q);

    KahanSumC direct;
    for (std::uint64_t l = support_lo(L); l <= support_hi(L); ++l)
      direct.add(V1(static_cast<double>(l) / L) * kl4.at(ctx->mul(am, l % q)));

    // duals at +ltilde and -ltilde share |Vhat| ladder index |ltilde|
    KahanSumC dual;
    for (std::int64_t lt = -static_cast<std::int64_t>(hat.size()) + 1;
         lt < static_cast<std::int64_t>(hat.size()); ++lt) {
      const cplx v1hat = lt >= 0 ? hat[lt] : std::conj(hat[-lt]);
      cplx kernel{qm2, 0.0};
      const std::uint64_t lt_mod = ctx->reduce(lt);
      if (lt_mod != 0) {
        const std::uint64_t arg =
            ctx->reduce(-static_cast<std::int64_t>(ctx->mul(am, ctx->inverse(lt_mod))));
        kernel += kl3.at(arg);
      }
      dual.add(kernel * v1hat);
    }
    max_resid = std::max(max_resid, std::abs(direct.value() - poisson_scale * dual.value()));
  }
  return max_resid;
}

CsSplitReport cauchy_schwarz_split(double L, double M, std::uint64_t a, const CtxPtr& ctx,
                                   const TraceTable& kl4, const TestFunction& V1,
                                   const TestFunction& V2) {
  const std::uint64_t q = ctx->q();
  require(ctx->is_unit(a), errc::invalid_argument, "cauchy_schwarz_split: a must be a unit");
  const std::uint64_t l_lo = support_lo(L), l_hi = support_hi(L);
  const std::uint64_t m_lo = support_lo(M), m_hi = support_hi(M);
  require((l_hi - l_lo + 1) * (l_hi - l_lo + 1) <= kCellBudget, errc::resource_limit,
          "cauchy_schwarz_split: l-pair budget");

  CsSplitReport rep;

  // direct value of sum_m |sum_l Kl4 V1|^2 V2
  {
    KahanSum acc;
    for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
      const double w2 = V2(static_cast<double>(m) / M);
      if (w2 == 0.0) continue;
      const std::uint64_t am = ctx->mul(a % q, m % q);
      KahanSumC inner;
      for (std::uint64_t l = l_lo; l <= l_hi; ++l)
        inner.add(V1(static_cast<double>(l) / L) * kl4.at(ctx->mul(am, l % q)));
      acc.add(std::norm(inner.value()) * w2);
    }
    rep.direct = acc.value();
  }

  // diagonal l1 = l2, summed directly
  {
    KahanSum acc;
    for (std::uint64_t l = l_lo; l <= l_hi; ++l) {
      const double w1 = V1(static_cast<double>(l) / L);
      if (w1 == 0.0) continue;
      const std::uint64_t al = ctx->mul(a % q, l % q);
      KahanSum inner;
      for (std::uint64_t m = m_lo; m <= m_hi; ++m)
        inner.add(std::norm(kl4.at(ctx->mul(al, m % q))) * V2(static_cast<double>(m) / M));
      acc.add(w1 * w1 * inner.value());
    }
    rep.diagonal = acc.value();
  }

  // off-diagonal via Poisson in m: inner sum = (M/sqrt(q)) sum_mt C_a V2hat
  {
    const std::vector<cplx> hat = hat_ladder(V2, M, q);
    const double poisson_scale = M / std::sqrt(static_cast<double>(q));
    KahanSumC acc;
    for (std::uint64_t l1 = l_lo; l1 <= l_hi; ++l1) {
      const double w1 = V1(static_cast<double>(l1) / L);
      if (w1 == 0.0) continue;
      for (std::uint64_t l2 = l_lo; l2 <= l_hi; ++l2) {
        if (l1 == l2) continue;
        const double w2 = V1(static_cast<double>(l2) / L);
        if (w2 == 0.0) continue;
        const std::vector<cplx> corr = correlation_row(ctx, a, l1, l2, &kl4);
        KahanSumC inner;
        for (std::int64_t mt = -static_cast<std::int64_t>(hat.size()) + 1;
             mt < static_cast<std::int64_t>(hat.size()); ++mt) {
          const cplx v2hat = mt >= 0 ? hat[mt] : std::conj(hat[-mt]);
          inner.add(corr[ctx->reduce(mt)] * v2hat);
        }
        acc.add(w1 * w2 * poisson_scale * inner.value());
      }
    }
    rep.off_diagonal = acc.value();
  }

  rep.reassembly = std::abs(rep.direct - (rep.diagonal + rep.off_diagonal));
  rep.diag_shape = L * M;
  rep.offdiag_shape = L * L * std::sqrt(static_cast<double>(q));
  return rep;
}

std::string regime_case_name(RegimeCase c) {
  switch (c) {
    case RegimeCase::trivial: return "trivial";
    case RegimeCase::cauchy_schwarz: return "cauchy-schwarz";
    case RegimeCase::poisson_l: return "poisson-l";
    case RegimeCase::klms: return "klms";
    case RegimeCase::cauchy_schwarz_high: return "cauchy-schwarz-high";
  }
  return "?";
}

RegimeCase classify_regime(double L, double M, double q, double X, double eta) {
  require(L >= 1.0 && M >= 1.0 && q >= 2.0 && X >= 1.0, errc::invalid_argument,
          "classify_regime: L, M, q, X must be >= 1");
  require(eta > 0.0 && eta < 1.0 / 15.0, errc::invalid_argument,
          "classify_regime: eta must lie in (0, 1/15)");
  const double L0 = std::pow(X, 1.0 / 52.0);
  const double m_split = std::pow(q, 4.0 / 3.0);
  const double l_split = std::pow(q, 8.0 / 15.0 + eta);
  if (M >= m_split) return L <= L0 ? RegimeCase::klms : RegimeCase::cauchy_schwarz_high;
  if (L <= L0) return RegimeCase::trivial;
  return L < l_split ? RegimeCase::cauchy_schwarz : RegimeCase::poisson_l;
}

double regime_envelope(RegimeCase c, double L, double M, double q, double X) {
  const double xq = X / q;
  switch (c) {
    case RegimeCase::trivial:
      return xq * (L * M / std::pow(q, 1.5));
    case RegimeCase::cauchy_schwarz:
    case RegimeCase::cauchy_schwarz_high:
      return xq * std::sqrt(std::pow(q, 5.0) / (X * X * L) + L * std::pow(q, 1.5) / X);
    case RegimeCase::poisson_l:
      return xq * (M / q);
    case RegimeCase::klms:
      return xq * std::pow(std::pow(L, 3.0) * std::pow(q, 37.0) / std::pow(X, 15.0), 1.0 / 18.0);
  }
  return 0.0;
}

RegimeScanResult regime_scan(std::uint64_t q, double X, double eta, const CtxPtr& ctx,
                             const CoefficientSeries& lam, const TraceTable& kl4) {
  RegimeScanResult scan;
  const double lm_cap = std::pow(static_cast<double>(q), 4.0) / X;
  const Weight bump = [](double u) { return dyadic_bump(u); };
  for (int j = 0;; ++j) {
    const double L = std::pow(2.0, 0.5 * j);
    if (L > lm_cap) break;
    for (int k = 0;; ++k) {
      const double M = std::pow(2.0, 0.5 * k);
      if (L * M > lm_cap) break;
      if (L * M > kCellBudget) {
        scan.notes.push_back("skipped L=" + std::to_string(L) + " M=" + std::to_string(M) +
                             ": cell exceeds the L*M budget");
        continue;
      }
      if (lam.N < support_hi(M)) {
        scan.notes.push_back("skipped L=" + std::to_string(L) + " M=" + std::to_string(M) +
                             ": series too short");
        continue;
      }
      RegimeScanRow row;
      row.L = L;
      row.M = M;
      row.regime = classify_regime(L, M, static_cast<double>(q), X, eta);
      row.abs_sum = std::abs(bilinear_sum(L, M, 1, ctx, X, kl4, lam, bump, bump));
      row.trivial = bilinear_trivial_bound(L, M, 1, ctx, X, kl4, lam, bump, bump);
      row.envelope = regime_envelope(row.regime, L, M, static_cast<double>(q), X);
      scan.rows.push_back(row);
    }
  }
  return scan;
}

std::string regime_scan_csv(const RegimeScanResult& scan) {
  std::ostringstream os;
  os.precision(17);
  os << "# bilinear regime scan; envelope uses implied constant 1\n";
  for (const auto& note : scan.notes) os << "# " << note << "\n";
  os << "L,M,case,abs_S,trivial,envelope\n";
  for (const auto& r : scan.rows)
    os << r.L << ',' << r.M << ',' << regime_case_name(r.regime) << ',' << r.abs_sum << ','
       << r.trivial << ',' << r.envelope << '\n';
  return os.str();
}

}  // namespace aplab
