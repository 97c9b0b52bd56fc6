#pragma once

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "aplab/common.hpp"

namespace aplab {

// Principal-branch log Gamma via a 13-term Lanczos rational approximation,
// with the reflection formula for Re z < 1/2. Good to ~1e-13 relative.
cplx log_gamma(cplx z);

// Gamma_R(s) = pi^{-s/2} Gamma(s/2). Rejects s within 1e-8 of a pole.
cplx gamma_R(cplx s);
cplx log_gamma_R(cplx s);

// Archimedean parameters of a degree-4 completed L-function.
struct SpectralData {
  std::array<cplx, 4> mu;
  std::string preset;

  // {0, -1, 1-k, -k}: the weight-k holomorphic symmetric-square shape.
  static SpectralData holomorphic_sym2(unsigned weight = 12);
  // {0, nu2-nu1, 2 nu1+nu2-1, 1-nu1-2 nu2} from raw spherical parameters.
  static SpectralData maass(cplx nu1, cplx nu2);
};

// L_infty(s) = prod_i Gamma_R(s - mu_i).
cplx l_infty(const SpectralData& data, cplx s);

// Smooth bump supported on [1,2]: amplitude * exp(b - b/(1-t^2)), t = 2x-3.
// Vanishes to all orders at both endpoints for every sharpness b > 0; the
// default b = 1 is the reference weight. Larger b concentrates the bump at
// 3/2, which drives the decay rate of every transform taken of it: the
// Mellin transform falls like exp(-sqrt(b t / 2)) in height t, and the dual
// weight built from it like exp(-sqrt(b/2) y^{1/8}).
class TestFunction {
 public:
  explicit TestFunction(double amplitude = 1.0, double sharpness = 1.0)
      : amplitude_(amplitude), sharpness_(sharpness) {}
  double operator()(double x) const;
  double amplitude() const { return amplitude_; }
  double sharpness() const { return sharpness_; }

 private:
  double amplitude_;
  double sharpness_;
};

// Adaptive Gauss-Legendre quadrature with an absolute-error target.
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                        int panel_budget = 4000);

// Mellin transform of V: integral over [1,2] of V(y) y^{s-1} dy (entire in s).
cplx mellin(const TestFunction& V, cplx s, double abs_tol = 1e-13);

// Real-line Fourier transform of V: integral of V(x) e(-x xi) dx.
cplx fourier_hat(const TestFunction& V, double xi, double abs_tol = 1e-13);

// Inverse-Mellin reconstruction (1/2 pi i) int_(sigma) Vtilde(s) x^{-s} ds.
double inverse_mellin(const TestFunction& V, double x, double sigma, double t_max = 120.0);

struct DualWeightOptions {
  // Contour abscissa. Any sigma > 0 gives the same value (the integrand is
  // holomorphic there); on sigma = 1/2 the gamma-factor ratio has modulus
  // exactly one, so the truncation height stays minimal and nothing
  // amplifies quadrature noise. The contour-shift freedom is still checked
  // against sigma = 3/2 and 2 in the tests.
  double sigma = 0.5;
  int panel_order = 20;     // Gauss-Legendre order per panel
  double panel_width = 1.0;
  double t_min = 60.0;      // minimum truncation height, grown adaptively
  double tail_tol = 1e-12;  // relative tail target for the adaptive height
};

// Mellin values of the weight along one contour, extended panel by panel and
// shared by the transforms of both parities (the gamma ratio is the only
// parity-dependent factor). Panels are built in batches with incremental
// phase rotations, so extending the contour costs multiply-adds rather than
// trigonometric calls.
class MellinNodeCache {
 public:
  MellinNodeCache(const TestFunction& V, const DualWeightOptions& opt);
  ~MellinNodeCache();

  struct Node {
    double t;
    double weight;  // quadrature weight, panel-scaled
    cplx mellin;    // Vtilde(1 - sigma - i t)
  };
  // Nodes of panel k, computing them on first use.
  const std::vector<Node>& panel(std::size_t k) const;
  const DualWeightOptions& options() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// The dual-sum weight: the inverse Mellin transform, along a vertical
// contour, of [L_infty(dual, s + parity) / L_infty(1 - s + parity)] times
// the Mellin transform of V. The contour data (gamma ratio times Mellin
// values at quadrature nodes) is cached once, so each evaluation is a short
// dot product against y^{-s}. Rapidly decreasing in y.
class DualWeight {
 public:
  DualWeight(const SpectralData& data, int parity, const TestFunction& V,
             DualWeightOptions opt = {});
  DualWeight(const SpectralData& data, int parity, const TestFunction& V,
             std::shared_ptr<const MellinNodeCache> cache);

  cplx operator()(double y) const;

  double peak() const { return peak_; }
  // Smallest sampled y past the peak with |value| staying below ratio*peak.
  double cutoff_y(double ratio) const;
  // Integral bound on |value| over [y0, inf) from the fitted decay envelope
  // log|value| ~ alpha - beta y^{1/4}.
  double tail_envelope_bound(double y0) const;
  double truncation_height() const { return t_max_; }
  const DualWeightOptions& options() const { return opt_; }

 private:
  struct Node {
    double t;
    cplx gw;  // quadrature weight times integrand factor independent of y
  };
  DualWeightOptions opt_;
  std::vector<Node> nodes_;
  double t_max_ = 0.0;
  double peak_ = 0.0;
  std::vector<std::pair<double, double>> samples_;  // (y, |value|)
  double env_alpha_ = 0.0, env_beta_ = -1.0;
};

// Fast evaluator over a y-range: samples the transform's analytic signal on a
// uniform log grid, strips the leading ~y^{1/4} phase (fitted, not assumed),
// and interpolates the remaining slowly varying complex amplitude with a
// 4-point rule. The grid is refined until spot checks against direct
// evaluation pass. Values outside the range fall back to the direct sum.
class DualWeightSampler {
 public:
  DualWeightSampler(const DualWeight& w, double y_lo, double y_hi, double abs_tol = 1e-10);

  // analytic signal; the transform itself is the real part
  cplx value(double y) const;
  double real_value(double y) const { return value(y).real(); }
  double phase_coefficient() const { return c0_; }
  std::size_t grid_size() const { return h_.size(); }

 private:
  void build(double step);

  const DualWeight* w_;
  double y_lo_, y_hi_;
  double c0_ = 0.0;
  double l_lo_ = 0.0, step_ = 0.0;
  std::vector<cplx> h_;
};

}  // namespace aplab
