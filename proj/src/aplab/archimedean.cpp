#include "aplab/archimedean.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace aplab {

namespace {

using ldbl = long double;
using lcplx = std::complex<ldbl>;

constexpr double kLanczosG = 6.024680040776729583740234375;

// lanczos13m53 rational coefficients (increasing powers); the denominator is
// z(z+1)...(z+11).
constexpr double kLanczosNum[13] = {
    23531376880.410759688572007674451636754734,
    42919803642.649098768957899047001988850926,
    35711959237.355668049440185451547166705960,
    17921034426.037209699919755754458931112671,
    6039542586.3520280050642916443072979210699,
    1439720407.3117216736632230727949123939715,
    248874557.86205415651146038641322942321632,
    31426415.585400194380614231628318205362874,
    2876370.6289353724412254090516208496135991,
    186056.26539522349504029498971604569928220,
    8071.6720023658162106380029022722506138218,
    210.82427775157934587250973392071336271166,
    2.5066282746310002701649081771338373386264,
};
constexpr double kLanczosDen[13] = {
    0, 39916800, 120543840, 150917976, 105258076, 45995730, 13339535,
    2637558, 357423, 32670, 1925, 66, 1,
};

cplx horner13(const double* c, cplx z) {
  cplx r = c[12];
  for (int i = 11; i >= 0; --i) r = r * z + c[i];
  return r;
}

// log sin(pi z), stable for large |Im z|.
cplx log_sin_pi(cplx z) {
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  const cplx i_pi_z = cplx{0.0, kPi} * z;
  return -i_pi_z - std::log(cplx{0.0, 2.0}) + std::log(1.0 - std::exp(2.0 * i_pi_z));
}

cplx log_gamma_core(cplx z) {
  const cplx base = z + (kLanczosG - 0.5);
  return (z - 0.5) * std::log(base) - base +
         std::log(horner13(kLanczosNum, z) / horner13(kLanczosDen, z));
}

// ---- long-double Gauss-Legendre rules -------------------------------------

struct GlRule {
  std::vector<ldbl> x, w;
};

const GlRule& gauss_legendre_ld(int order) {
  static std::mutex mutex;
  static std::map<int, GlRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GlRule rule;
  rule.x.resize(order);
  rule.w.resize(order);
  for (int i = 0; i < order; ++i) {
    ldbl t = std::cos(kPi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 200; ++iter) {
      ldbl p0 = 1.0L, p1 = t;
      for (int k = 2; k <= order; ++k) {
        ldbl p2 = ((2.0L * k - 1.0L) * t * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      ldbl dp = order * (t * p1 - p0) / (t * t - 1.0L);
      ldbl dt = p1 / dp;
      t -= dt;
      if (std::abs(static_cast<double>(dt)) < 1e-19) break;
    }
    ldbl p0 = 1.0L, p1 = t;
    for (int k = 2; k <= order; ++k) {
      ldbl p2 = ((2.0L * k - 1.0L) * t * p1 - (k - 1.0L) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    ldbl dp = order * (t * p1 - p0) / (t * t - 1.0L);
    rule.x[i] = t;
    rule.w[i] = 2.0L / ((1.0L - t * t) * dp * dp);
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

lcplx composite_gl_ld(const std::function<lcplx(ldbl)>& f, ldbl a, ldbl b, int panels, int order) {
  const GlRule& rule = gauss_legendre_ld(order);
  lcplx total{0.0L, 0.0L};
  const ldbl width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const ldbl lo = a + p * width;
    const ldbl mid = lo + 0.5L * width;
    lcplx acc{0.0L, 0.0L};
    for (int i = 0; i < order; ++i) acc += rule.w[i] * f(mid + 0.5L * width * rule.x[i]);
    total += acc * (0.5L * width);
  }
  return total;
}

// ---- the bump and its derivatives ------------------------------------------
//
// V(x) = exp(b - b/(1 - u^2)) with u = 2x - 3 and sharpness b. Derivatives
// stay of the form N_k(u) V(x) / (1-u^2)^{2k} with polynomial N_k, built by
// the recurrence
//   N_{k+1} = 2 (1-u^2) [N_k' (1-u^2) + 2 m_k u N_k] - 4 b u N_k,  m_k = 2k.
// They feed the integration-by-parts Mellin/Fourier forms whose explicit
// 1/|s|^k decay removes the cancellation that plain quadrature hits at large
// frequency.

constexpr int kParts = 6;

using Poly = std::vector<ldbl>;  // coefficients in increasing powers of u

Poly poly_derivative(const Poly& p) {
  Poly d(std::max<std::size_t>(1, p.size() - 1), 0.0L);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<ldbl>(i);
  return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add_scaled(Poly a, const Poly& b, ldbl scale) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0L);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
  return a;
}

Poly make_deriv_poly(ldbl beta) {
  const Poly one_minus_u2 = {1.0L, 0.0L, -1.0L};
  Poly n = {1.0L};
  for (int k = 0; k < kParts; ++k) {
    const ldbl m = 2.0L * k;
    // 2 (1-u^2) [N' (1-u^2) + 2 m u N] - 4 b u N
    Poly term = poly_mul(poly_derivative(n), one_minus_u2);
    term = poly_add_scaled(term, poly_mul(Poly{0.0L, 2.0L * m}, n), 1.0L);
    term = poly_mul(term, one_minus_u2);
    for (auto& c : term) c *= 2.0L;
    term = poly_add_scaled(term, poly_mul(Poly{0.0L, 4.0L * beta}, n), -1.0L);
    n = std::move(term);
  }
  return n;
}

ldbl bump_ld(ldbl x, ldbl beta) {
  const ldbl u = 2.0L * x - 3.0L;
  const ldbl eps = 1.0L - u * u;
  if (eps <= 0.0L) return 0.0L;
  const ldbl log_weight = beta * (1.0L - 1.0L / eps);
  return log_weight < -11000.0L ? 0.0L : std::exp(log_weight);
}

// V^{(kParts)}(x) given the sharpness and its derivative polynomial
ldbl bump_deriv_ld(ldbl x, ldbl beta, const Poly& n) {
  const ldbl u = 2.0L * x - 3.0L;
  const ldbl eps = 1.0L - u * u;
  if (eps <= 0.0L) return 0.0L;
  const ldbl log_weight = beta * (1.0L - 1.0L / eps) - (2.0L * kParts) * std::log(eps);
  if (log_weight < -11000.0L) return 0.0L;
  ldbl acc = 0.0L;
  for (std::size_t i = n.size(); i-- > 0;) acc = acc * u + n[i];
  return acc * std::exp(log_weight);
}

int oscillation_panels(double freq) {
  return std::max(8, static_cast<int>(std::ceil(std::abs(freq) / 6.0)) + 2);
}

// Sharp bumps concentrate on a scale ~ 1/sqrt(b), and the high derivative in
// the by-parts integrand oscillates a further sqrt(k) faster; the panel count
// has to resolve that regardless of frequency.
int feature_panels(double beta) { return std::max(8, static_cast<int>(32.0 * std::sqrt(beta))); }

constexpr double kHybridSwitch = 16.0;

// Fixed-grid samples of V^{(kParts)}; the same y-nodes serve every frequency
// below the grid's resolution limit (about 6 oscillation cycles per panel for
// order-24 Gauss-Legendre). Grids are cached per sharpness and size.
struct ByPartsTable {
  std::vector<ldbl> y;
  std::vector<ldbl> log_y;
  std::vector<ldbl> deriv_w;  // V^{(kParts)}(y_i) * w_i
  double max_cycles;
};

ByPartsTable make_by_parts_table(int panels, ldbl beta) {
  ByPartsTable t;
  const Poly poly = make_deriv_poly(beta);
  const GlRule& rule = gauss_legendre_ld(24);
  const ldbl width = 1.0L / panels;
  for (int p = 0; p < panels; ++p) {
    const ldbl mid = 1.0L + (p + 0.5L) * width;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const ldbl y = mid + 0.5L * width * rule.x[i];
      t.y.push_back(y);
      t.log_y.push_back(std::log(y));
      t.deriv_w.push_back(bump_deriv_ld(y, beta, poly) * rule.w[i] * (0.5L * width));
    }
  }
  t.max_cycles = 6.0 * panels;
  return t;
}

// total phase sweep over [1,2] is 2 pi * cycles
const ByPartsTable& by_parts_table(double beta, double cycles) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, ByPartsTable> cache;
  int panels = std::max(96, feature_panels(beta));
  while (6.0 * panels < std::abs(cycles) + 48.0) panels *= 2;
  require(panels <= (1 << 15), errc::tolerance_failure,
          "frequency beyond the by-parts grid budget");
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({beta, panels});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(beta, panels),
                       make_by_parts_table(panels, static_cast<ldbl>(beta))).first;
  return it->second;
}

lcplx mellin_impl(double amplitude, double beta, cplx s) {
  const ldbl sr = static_cast<ldbl>(s.real());
  const ldbl si = static_cast<ldbl>(s.imag());
  if (std::abs(s.imag()) <= kHybridSwitch) {
    const auto f = [&](ldbl y) -> lcplx {
      const ldbl ly = std::log(y);
      const ldbl mag = bump_ld(y, static_cast<ldbl>(beta)) * std::exp((sr - 1.0L) * ly);
      return lcplx{mag * std::cos(si * ly), mag * std::sin(si * ly)};
    };
    const int panels = std::max(oscillation_panels(s.imag()), feature_panels(beta));
    return static_cast<ldbl>(amplitude) * composite_gl_ld(f, 1.0L, 2.0L, panels, 24);
  }
  // integration by parts kParts times:
  //   Vtilde(s) = (-1)^k / (s (s+1) ... (s+k-1)) * int V^{(k)}(y) y^{s+k-1} dy
  const ByPartsTable& table = by_parts_table(beta, s.imag() * 0.6931 / kTwoPi);
  lcplx integral{0.0L, 0.0L};
  for (std::size_t i = 0; i < table.log_y.size(); ++i) {
    const ldbl ly = table.log_y[i];
    const ldbl mag = table.deriv_w[i] * std::exp((sr + kParts - 1.0L) * ly);
    integral += lcplx{mag * std::cos(si * ly), mag * std::sin(si * ly)};
  }
  lcplx denom{1.0L, 0.0L};
  for (int j = 0; j < kParts; ++j) denom *= lcplx{sr + j, si};
  const ldbl sign = kParts % 2 == 0 ? 1.0L : -1.0L;
  return static_cast<ldbl>(amplitude) * sign * integral / denom;
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.real() >= 0.5) return log_gamma_core(z);
  return std::log(kPi) - log_sin_pi(z) - log_gamma_core(1.0 - z);
}

cplx log_gamma_R(cplx s) { return -0.5 * s * std::log(kPi) + log_gamma(0.5 * s); }

cplx gamma_R(cplx s) {
  const cplx half = 0.5 * s;
  if (half.real() <= 0.0625 && std::abs(half.imag()) < 0.0625) {
    const double nearest = std::round(half.real());
    if (nearest <= 0.0 && std::abs(half - cplx{nearest, 0.0}) < 1e-8)
      fail(errc::invalid_argument, "gamma_R: argument within 1e-8 of a pole");
  }
  return std::exp(log_gamma_R(s));
}

SpectralData SpectralData::holomorphic_sym2(unsigned weight) {
  SpectralData d;
  d.mu = {cplx{0.0, 0.0}, cplx{-1.0, 0.0}, cplx{1.0 - static_cast<double>(weight), 0.0},
          cplx{-static_cast<double>(weight), 0.0}};
  d.preset = "holomorphic_sym2_k" + std::to_string(weight);
  return d;
}

SpectralData SpectralData::maass(cplx nu1, cplx nu2) {
  SpectralData d;
  d.mu = {cplx{0.0, 0.0}, nu2 - nu1, 2.0 * nu1 + nu2 - 1.0, 1.0 - nu1 - 2.0 * nu2};
  d.preset = "maass";
  return d;
}

cplx l_infty(const SpectralData& data, cplx s) {
  cplx log_acc{0.0, 0.0};
  for (const cplx& mu : data.mu) log_acc += log_gamma_R(s - mu);
  return std::exp(log_acc);
}

double TestFunction::operator()(double x) const {
  return amplitude_ *
         static_cast<double>(bump_ld(static_cast<ldbl>(x), static_cast<ldbl>(sharpness_)));
}

cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                        int panel_budget) {
  struct Panel {
    double a, b;
    cplx coarse;
  };
  const auto estimate = [&](double lo, double hi) {
    const GlRule& rule = gauss_legendre_ld(16);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    cplx acc{0.0, 0.0};
    for (int i = 0; i < 16; ++i)
      acc += static_cast<double>(rule.w[i]) * f(mid + half * static_cast<double>(rule.x[i]));
    return acc * half;
  };
  std::vector<Panel> stack{{a, b, estimate(a, b)}};
  cplx total{0.0, 0.0};
  int used = 0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    require(++used <= panel_budget, errc::tolerance_failure,
            "integrate_adaptive: panel budget exhausted before reaching the accuracy target");
    const double mid = 0.5 * (p.a + p.b);
    const cplx left = estimate(p.a, mid);
    const cplx right = estimate(mid, p.b);
    const cplx fine = left + right;
    const double panel_tol = abs_tol * std::max(0.02, (p.b - p.a) / (b - a));
    if (std::abs(fine - p.coarse) <= panel_tol || (p.b - p.a) < 1e-12) {
      total += fine;
    } else {
      stack.push_back({p.a, mid, left});
      stack.push_back({mid, p.b, right});
    }
  }
  return total;
}

cplx mellin(const TestFunction& V, cplx s, double abs_tol) {
  (void)abs_tol;
  require(std::abs(s.imag()) <= 5e4, errc::tolerance_failure,
          "mellin: frequency beyond the panel budget");
  const lcplx v = mellin_impl(V.amplitude(), V.sharpness(), s);
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

cplx fourier_hat(const TestFunction& V, double xi, double abs_tol) {
  (void)abs_tol;
  require(std::abs(xi) <= 5e4, errc::tolerance_failure,
          "fourier_hat: frequency beyond the panel budget");
  const ldbl lxi = static_cast<ldbl>(xi);
  lcplx value;
  if (std::abs(xi) <= kHybridSwitch) {
    const auto f = [&](ldbl x) -> lcplx {
      const ldbl phase = -kTwoPi * x * lxi;
      return bump_ld(x, static_cast<ldbl>(V.sharpness())) * lcplx{std::cos(phase), std::sin(phase)};
    };
    const int panels = std::max(oscillation_panels(2.0 * xi), feature_panels(V.sharpness()));
    value = composite_gl_ld(f, 1.0L, 2.0L, panels, 24);
  } else {
    // k integrations by parts: (2 pi i xi)^{-k} int V^{(k)}(x) e(-x xi) dx
    const ByPartsTable& table = by_parts_table(V.sharpness(), xi);
    value = lcplx{0.0L, 0.0L};
    for (std::size_t i = 0; i < table.y.size(); ++i) {
      const ldbl phase = -kTwoPi * table.y[i] * lxi;
      value += table.deriv_w[i] * lcplx{std::cos(phase), std::sin(phase)};
    }
    lcplx denom{1.0L, 0.0L};
    for (int j = 0; j < kParts; ++j) denom *= lcplx{0.0L, kTwoPi * lxi};
    value /= denom;
  }
  value *= static_cast<ldbl>(V.amplitude());
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

double inverse_mellin(const TestFunction& V, double x, double sigma, double t_max) {
  const auto f = [&](double t) {
    const cplx s{sigma, t};
    return mellin(V, s) * std::exp(-s * std::log(x));
  };
  cplx half = integrate_adaptive(f, 0.0, t_max, 1e-12, 20000);
  return half.real() / kPi;
}

struct MellinNodeCache::Impl {
  TestFunction v;
  DualWeightOptions opt;
  std::vector<std::vector<Node>> panels;
  std::mutex mutex;

  // Per-grid data for the batched by-parts evaluation at fixed Re s: the
  // y-independent base factor plus the per-y rotations for the panel step and
  // the intra-panel node offsets.
  struct FastGrid {
    const ByPartsTable* table = nullptr;
    std::vector<ldbl> base;
    std::vector<lcplx> offs;  // [y * order + j] = e(-i b_j log y)
    std::vector<lcplx> rot;   // [y] = e(-i width log y)
  };
  FastGrid small, big;

  static constexpr std::size_t kChunk = 16;

  void ensure_grid(FastGrid& grid, const ByPartsTable& table) {
    if (grid.table == &table) return;  // rebuild when the quantized grid grows
    grid.table = &table;
    const GlRule& rule = gauss_legendre_ld(opt.panel_order);
    const ldbl sr = static_cast<ldbl>(1.0 - opt.sigma);
    const std::size_t ny = table.y.size();
    grid.base.resize(ny);
    grid.rot.resize(ny);
    grid.offs.resize(ny * opt.panel_order);
    for (std::size_t i = 0; i < ny; ++i) {
      const ldbl ly = table.log_y[i];
      grid.base[i] = table.deriv_w[i] * std::exp((sr + kParts - 1.0L) * ly);
      grid.rot[i] = lcplx{std::cos(opt.panel_width * ly), -std::sin(opt.panel_width * ly)};
      for (int j = 0; j < opt.panel_order; ++j) {
        const ldbl b = 0.5L * opt.panel_width * rule.x[j];
        grid.offs[i * opt.panel_order + j] = lcplx{std::cos(b * ly), -std::sin(b * ly)};
      }
    }
  }

  // Vtilde(1 - sigma - i t) one node at a time (start-up region).
  cplx single(double t) const { return mellin(v, cplx{1.0 - opt.sigma, -t}); }

  cplx finish(lcplx integral, double t) const {
    const ldbl si = static_cast<ldbl>(-t);
    lcplx denom{1.0L, 0.0L};
    for (int j = 0; j < kParts; ++j) denom *= lcplx{static_cast<ldbl>(1.0 - opt.sigma) + j, si};
    const ldbl sign = kParts % 2 == 0 ? 1.0L : -1.0L;
    const lcplx out = static_cast<ldbl>(v.amplitude()) * sign * integral / denom;
    return {static_cast<double>(out.real()), static_cast<double>(out.imag())};
  }

  void append_chunk() {
    const std::size_t first = panels.size();
    const int order = opt.panel_order;
    const GlRule& rule = gauss_legendre_ld(order);
    const double width = opt.panel_width;

    std::vector<std::vector<Node>> chunk(kChunk, std::vector<Node>(order));
    for (std::size_t k = 0; k < kChunk; ++k) {
      const double lo = (first + k) * width;
      for (int j = 0; j < order; ++j) {
        chunk[k][j].t = lo + 0.5 * width + 0.5 * width * static_cast<double>(rule.x[j]);
        chunk[k][j].weight = 0.5 * width * static_cast<double>(rule.w[j]);
      }
    }
    const double t_lo = chunk.front().front().t;
    const double t_hi = chunk.back().back().t;
    const double cycles_hi = t_hi * 0.6931 / kTwoPi;
    const ByPartsTable& small_table = by_parts_table(v.sharpness(), 0.0);
    const bool batched = t_lo > kHybridSwitch;
    if (!batched) {
      for (auto& nodes : chunk)
        for (auto& node : nodes)
          node.mellin = node.t <= kHybridSwitch
                            ? single(node.t)
                            : finish(by_parts_integral(node.t), node.t);
    } else {
      FastGrid& grid = cycles_hi <= small_table.max_cycles ? small : big;
      ensure_grid(grid, by_parts_table(v.sharpness(), cycles_hi));
      const std::size_t ny = grid.table->y.size();
      std::vector<lcplx> acc(kChunk * order, lcplx{0.0L, 0.0L});
      const ldbl a0 = static_cast<ldbl>((first + 0.5) * width);
      for (std::size_t i = 0; i < ny; ++i) {
        const ldbl ly = grid.table->log_y[i];
        lcplx cur = lcplx{std::cos(a0 * ly), -std::sin(a0 * ly)} * grid.base[i];
        const lcplx rot = grid.rot[i];
        const lcplx* offs = &grid.offs[i * order];
        for (std::size_t k = 0; k < kChunk; ++k) {
          lcplx* row = &acc[k * order];
          for (int j = 0; j < order; ++j) row[j] += cur * offs[j];
          cur *= rot;
        }
      }
      for (std::size_t k = 0; k < kChunk; ++k)
        for (int j = 0; j < order; ++j)
          chunk[k][j].mellin = finish(acc[k * order + j], chunk[k][j].t);
    }
    for (auto& nodes : chunk) panels.push_back(std::move(nodes));
  }

  // direct per-node by-parts integral (chunk straddling the slow region)
  lcplx by_parts_integral(double t) const {
    const ByPartsTable& table = by_parts_table(v.sharpness(), t * 0.6931 / kTwoPi);
    const ldbl sr = static_cast<ldbl>(1.0 - opt.sigma);
    const ldbl si = static_cast<ldbl>(-t);
    lcplx integral{0.0L, 0.0L};
    for (std::size_t i = 0; i < table.log_y.size(); ++i) {
      const ldbl ly = table.log_y[i];
      const ldbl mag = table.deriv_w[i] * std::exp((sr + kParts - 1.0L) * ly);
      integral += mag * lcplx{std::cos(si * ly), std::sin(si * ly)};
    }
    return integral;
  }
};

MellinNodeCache::MellinNodeCache(const TestFunction& V, const DualWeightOptions& opt)
    : impl_(std::make_shared<Impl>()) {
  impl_->v = V;
  impl_->opt = opt;
}

MellinNodeCache::~MellinNodeCache() = default;

const DualWeightOptions& MellinNodeCache::options() const { return impl_->opt; }

const std::vector<MellinNodeCache::Node>& MellinNodeCache::panel(std::size_t k) const {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  while (impl_->panels.size() <= k) impl_->append_chunk();
  return impl_->panels[k];
}

DualWeight::DualWeight(const SpectralData& data, int parity, const TestFunction& V,
                       DualWeightOptions opt)
    : DualWeight(data, parity, V, std::make_shared<const MellinNodeCache>(V, opt)) {}

DualWeight::DualWeight(const SpectralData& data, int parity, [[maybe_unused]] const TestFunction& V,
                       std::shared_ptr<const MellinNodeCache> cache)
    : opt_(cache->options()) {
  require(parity == 0 || parity == 1, errc::invalid_argument, "DualWeight: parity must be 0 or 1");
  require(opt_.sigma > 0.0, errc::invalid_argument, "DualWeight: contour must have sigma > 0");
  const double kappa = static_cast<double>(parity);

  const auto gamma_ratio = [&](double t) {
    const cplx s{opt_.sigma, t};
    cplx log_ratio{0.0, 0.0};
    for (const cplx& mu : data.mu) {
      log_ratio += log_gamma_R(s + kappa - std::conj(mu));
      log_ratio -= log_gamma_R(1.0 - s + kappa - mu);
    }
    return std::exp(log_ratio);
  };

  // Grow the contour panel by panel until the integrand has decayed and the
  // measured tail is negligible against the largest value seen.
  double g_max = 0.0;
  std::vector<double> panel_max;
  const std::size_t max_panels = static_cast<std::size_t>(20000.0 / opt_.panel_width);
  for (std::size_t k = 0;; ++k) {
    require(k < max_panels, errc::tolerance_failure,
            "DualWeight: contour truncation height exceeded its budget");
    double local_max = 0.0;
    for (const MellinNodeCache::Node& node : cache->panel(k)) {
      const cplx g = gamma_ratio(node.t) * node.mellin;
      nodes_.push_back({node.t, g * node.weight});
      local_max = std::max(local_max, std::abs(g));
    }
    panel_max.push_back(local_max);
    g_max = std::max(g_max, local_max);
    t_max_ = (k + 1) * opt_.panel_width;
    if (t_max_ < opt_.t_min || panel_max.size() < 6) continue;
    const std::size_t k_now = panel_max.size();
    const double decay_floor = std::max(1e-14, 1e-2 * opt_.tail_tol);
    bool decayed = true;
    for (std::size_t j = k_now - 4; j < k_now; ++j)
      decayed = decayed && panel_max[j] <= decay_floor * g_max;
    if (!decayed) continue;
    const double ratio = panel_max[k_now - 1] / std::max(panel_max[k_now - 5], 1e-300);
    const double r = std::min(0.95, std::pow(std::max(ratio, 1e-30), 0.25));
    const double tail = panel_max[k_now - 1] * r / (1.0 - r) * opt_.panel_width;
    if (tail < opt_.tail_tol * g_max) break;
  }

  // Sample the decay once so callers can truncate sums against the measured
  // envelope.
  for (double y = 1.0 / 64.0; y <= 4096.0; y *= std::sqrt(2.0)) {
    const double v = std::abs((*this)(y));
    samples_.emplace_back(y, v);
    peak_ = std::max(peak_, v);
  }
  // Least squares for log|v| = alpha - beta y^{1/4} past the peak.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  bool past_peak = false;
  for (const auto& [y, v] : samples_) {
    if (v >= 0.999 * peak_) past_peak = true;
    if (!past_peak || v <= 1e-250 || v >= 0.5 * peak_) continue;
    const double xr = std::pow(y, 0.25), yr = std::log(v);
    sx += xr;
    sy += yr;
    sxx += xr * xr;
    sxy += xr * yr;
    ++count;
  }
  if (count >= 3) {
    const double det = count * sxx - sx * sx;
    if (std::abs(det) > 1e-12) {
      const double slope = (count * sxy - sx * sy) / det;
      env_alpha_ = (sy - slope * sx) / count;
      env_beta_ = -slope;
    }
  }
}

cplx DualWeight::operator()(double y) const {
  require(y > 0.0, errc::invalid_argument, "DualWeight: y must be positive");
  const double ln_y = std::log(y);
  KahanSum re, im;
  for (const Node& node : nodes_) {
    const cplx term = node.gw * std::polar(1.0, -node.t * ln_y);
    re.add(term.real());
    im.add(term.imag());
  }
  const double scale = std::exp(-opt_.sigma * ln_y) / kPi;
  // conjugate symmetry of the integrand folds the contour onto t > 0
  return {scale * re.value(), scale * im.value()};
}

double DualWeight::cutoff_y(double ratio) const {
  const double floor = ratio * peak_;
  double best = samples_.back().first;
  for (std::size_t i = samples_.size(); i-- > 0;) {
    if (samples_[i].second >= floor) break;
    best = samples_[i].first;
  }
  return best;
}

double DualWeight::tail_envelope_bound(double y0) const {
  if (env_beta_ <= 0.0) return peak_;  // no measured decay: refuse to certify
  const double u = env_beta_ * std::pow(y0, 0.25);
  const double incomplete = std::exp(-u) * (u * u * u + 3 * u * u + 6 * u + 6);
  return std::exp(env_alpha_) * 4.0 / std::pow(env_beta_, 4) * incomplete;
}

}  // namespace aplab

namespace aplab {

DualWeightSampler::DualWeightSampler(const DualWeight& w, double y_lo, double y_hi,
                                     double abs_tol)
    : w_(&w), y_lo_(y_lo), y_hi_(y_hi) {
  require(y_lo > 0.0 && y_hi > y_lo, errc::invalid_argument, "DualWeightSampler: bad range");

  // Fit the leading phase rate against y^{1/4} by walking the top of the
  // range with adaptive steps (each increment stays well inside a half turn).
  {
    double lo = std::max(y_lo, 0.5 * y_hi);
    double phase = 0.0;
    double y = lo;
    cplx prev = (*w_)(y);
    while (y < y_hi) {
      double step_factor = 1.0 + 0.25 / (1.0 + std::pow(y, 0.25));
      double y_next = std::min(y * step_factor, y_hi);
      cplx cur = (*w_)(y_next);
      if (std::abs(prev) > 1e-280 && std::abs(cur) > 1e-280) {
        double d = std::arg(cur / prev);
        while (std::abs(d) > 2.0 && y_next > y * 1.0000001) {
          y_next = std::sqrt(y * y_next);  // halve the log step
          cur = (*w_)(y_next);
          d = std::arg(cur / prev);
        }
        phase += d;
      }
      prev = cur;
      y = y_next;
    }
    const double dq = std::pow(y_hi, 0.25) - std::pow(lo, 0.25);
    c0_ = dq > 1e-12 ? -phase / dq : 0.0;
  }

  // Build, then verify against direct evaluation and refine if needed.
  double step = std::log(2.0) / 64.0;
  for (int attempt = 0; attempt < 7; ++attempt) {
    build(step);
    double worst = 0.0;
    Rng rng(0x5eedu + attempt);
    for (int i = 0; i < 24; ++i) {
      const double y = y_lo_ * std::exp(rng.uniform01() * std::log(y_hi_ / y_lo_));
      worst = std::max(worst, std::abs(value(y) - (*w_)(y)));
    }
    if (worst <= abs_tol) return;
    step *= 0.5;
  }
  fail(errc::tolerance_failure, "DualWeightSampler: grid refinement failed its accuracy target");
}

void DualWeightSampler::build(double step) {
  step_ = step;
  l_lo_ = std::log(y_lo_) - 2.0 * step;
  const double l_hi = std::log(y_hi_) + 2.0 * step;
  const std::size_t count = static_cast<std::size_t>(std::ceil((l_hi - l_lo_) / step)) + 4;
  h_.assign(count, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < count; ++i) {
    const double y = std::exp(l_lo_ + i * step);
    h_[i] = (*w_)(y) * std::polar(1.0, c0_ * std::pow(y, 0.25));
  }
}

cplx DualWeightSampler::value(double y) const {
  if (y < y_lo_ || y > y_hi_) return (*w_)(y);
  const double u = (std::log(y) - l_lo_) / step_;
  std::size_t i = static_cast<std::size_t>(u);
  if (i < 1) i = 1;
  if (i > h_.size() - 3) i = h_.size() - 3;
  const double t = u - static_cast<double>(i);
  // 4-point Lagrange on nodes {-1, 0, 1, 2}
  const double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  const cplx h = c0 * h_[i - 1] + c1 * h_[i] + c2 * h_[i + 1] + c3 * h_[i + 2];
  return h * std::polar(1.0, -c0_ * std::pow(y, 0.25));
}

}  // namespace aplab
