#include "aplab/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "aplab/ntt.hpp"

namespace aplab {

namespace {

constexpr std::uint64_t kTauMax = 4u << 20;  // ~4.2e6 terms

std::vector<std::uint32_t> smallest_prime_factor(std::uint64_t N) {
  std::vector<std::uint32_t> spf(N + 1, 0);
  for (std::uint64_t i = 2; i <= N; ++i) {
    if (spf[i] == 0) {
      for (std::uint64_t j = i; j <= N; j += i)
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return spf;
}

// coefficients of prod_{m>=1} (1 - x^m) up to x^{len-1} (pentagonal numbers)
std::vector<i128> euler_function_series(std::size_t len) {
  std::vector<i128> phi(len, 0);
  phi[0] = 1;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t g1 = k * (3 * k - 1) / 2;
    const std::int64_t g2 = k * (3 * k + 1) / 2;
    if (g1 >= static_cast<std::int64_t>(len) && g2 >= static_cast<std::int64_t>(len)) break;
    const i128 sign = (k % 2 == 0) ? 1 : -1;
    if (g1 < static_cast<std::int64_t>(len)) phi[g1] = sign;
    if (g2 < static_cast<std::int64_t>(len)) phi[g2] = sign;
  }
  return phi;
}

// Local symmetric-square coefficients c_j at a prime with lambda_f(p) = t:
// the Euler factor 1/((1-a^2 x)(1-x)(1-a^{-2} x)) with t = a + 1/a gives
// c_j = (t^2-1)(c_{j-1} - c_{j-2}) + c_{j-3}.
template <typename T>
T sym2_power_step(const T& e1, const T& c1, const T& c2, const T& c3) {
  return e1 * (c1 - c2) + c3;
}

// Minimal exact polynomial arithmetic over Z for the symbolic identity check.
struct IntPoly {
  std::vector<long long> c;  // c[i] multiplies t^i

  static IntPoly constant(long long v) { return IntPoly{{v}}; }
  static IntPoly t() { return IntPoly{{0, 1}}; }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    return r;
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  bool operator==(const IntPoly& o) const {
    std::size_t n = std::max(c.size(), o.c.size());
    for (std::size_t i = 0; i < n; ++i) {
      long long x = i < c.size() ? c[i] : 0;
      long long y = i < o.c.size() ? o.c[i] : 0;
      if (x != y) return false;
    }
    return true;
  }
};

}  // namespace

CoefficientSeries ramanujan_tau(std::uint64_t N) {
  require(N >= 1, errc::invalid_argument, "ramanujan_tau: N must be >= 1");
  require(N <= kTauMax, errc::resource_limit,
          "ramanujan_tau: N exceeds the " + std::to_string(kTauMax) + " budget");

  // tau(n) = [x^{n-1}] phi(x)^24
  const std::size_t len = N;
  std::vector<i128> phi = euler_function_series(len);
  std::vector<i128> p2 = ntt::square_trunc(phi, len);
  std::vector<i128> p3 = ntt::multiply_trunc(p2, phi, len);
  std::vector<i128> p6 = ntt::square_trunc(p3, len);
  std::vector<i128> p12 = ntt::square_trunc(p6, len);
  std::vector<i128> p24 = ntt::square_trunc(p12, len);

  CoefficientSeries s;
  s.N = N;
  s.norm = Normalization::arithmetic;
  s.label = "tau";
  s.ints.assign(N + 1, 0);
  s.vals.assign(N + 1, 0.0);
  for (std::uint64_t n = 1; n <= N; ++n) {
    s.ints[n] = p24[n - 1];
    s.vals[n] = static_cast<double>(p24[n - 1]);
  }
  return s;
}

CoefficientSeries hecke_normalized(const CoefficientSeries& tau) {
  CoefficientSeries s;
  s.N = tau.N;
  s.norm = Normalization::unitary;
  s.label = "lambda_f";
  s.vals.assign(tau.N + 1, 0.0);
  for (std::uint64_t n = 1; n <= tau.N; ++n)
    s.vals[n] = static_cast<double>(tau.ints[n]) / std::pow(static_cast<double>(n), 5.5);
  return s;
}

CoefficientSeries hecke_normalized_rounded(std::uint64_t N) {
  require(N >= 1, errc::invalid_argument, "hecke_normalized_rounded: N must be >= 1");
  require(N <= (30u << 20), errc::resource_limit,
          "hecke_normalized_rounded: N exceeds the floating-tau budget");
  const std::size_t len = N;
  std::vector<i128> phi = euler_function_series(len);
  std::vector<i128> p2 = ntt::square_trunc(phi, len);
  std::vector<i128> p3 = ntt::multiply_trunc(p2, phi, len);
  std::vector<i128> p6 = ntt::square_trunc(p3, len);
  std::vector<i128> p12 = ntt::square_trunc(p6, len);
  p2.clear();
  p3.clear();
  p6.clear();
  phi.clear();
  std::vector<long double> p24 = ntt::multiply_trunc_rounded(p12, p12, len);
  CoefficientSeries s;
  s.N = N;
  s.norm = Normalization::unitary;
  s.label = "lambda_f";
  s.vals.assign(N + 1, 0.0);
  for (std::uint64_t n = 1; n <= N; ++n)
    s.vals[n] = static_cast<double>(p24[n - 1] / std::pow(static_cast<long double>(n), 5.5L));
  return s;
}

CoefficientSeries hecke_normalized(std::uint64_t N) {
  constexpr std::uint64_t kExactMax = 4u << 20;
  if (N <= kExactMax) return hecke_normalized(ramanujan_tau(N));
  return hecke_normalized_rounded(N);
}

CoefficientSeries sym2_series(const CoefficientSeries& hecke) {
  const std::uint64_t N = hecke.N;
  CoefficientSeries s;
  s.N = N;
  s.norm = Normalization::unitary;
  s.label = "lambda_sym2";
  s.vals.assign(N + 1, 0.0);
  s.vals[1] = 1.0;
  if (N == 1) return s;

  const auto spf = smallest_prime_factor(N);

  // Fill prime powers from the local Euler recursion.
  for (std::uint64_t p = 2; p <= N; ++p) {
    if (spf[p] != p) continue;
    const double e1 = hecke.vals[p] * hecke.vals[p] - 1.0;
    double c1 = 1.0, c2 = 0.0, c3 = 0.0;  // c_{j-1}, c_{j-2}, c_{j-3}
    for (u128 pe = p; pe <= N; pe *= p) {
      const double c0 = sym2_power_step(e1, c1, c2, c3);
      s.vals[static_cast<std::uint64_t>(pe)] = c0;
      c3 = c2;
      c2 = c1;
      c1 = c0;
    }
  }
  // Multiplicative assembly.
  for (std::uint64_t n = 2; n <= N; ++n) {
    const std::uint64_t p = spf[n];
    if (n == p) continue;
    std::uint64_t pe = p, m = n / p;
    while (m % p == 0) {
      pe *= p;
      m /= p;
    }
    if (m > 1) s.vals[n] = s.vals[pe] * s.vals[m];
  }

  // Divisor-sum oracle on a prefix: lambda_sym2(n) = sum_{d^2 m = n} lambda_f(m^2),
  // with lambda_f at square arguments rebuilt from per-prime Hecke recursions.
  const std::uint64_t check_to = std::min<std::uint64_t>(N, 10000);
  const auto lambda_f_of_square = [&](std::uint64_t m) {
    double out = 1.0;
    std::uint64_t rest = m;
    while (rest > 1) {
      const std::uint64_t p = spf[rest];
      unsigned e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      // lambda_f(p^{2e}) by the unitary recursion lam_{j+1} = t lam_j - lam_{j-1}
      const double t = hecke.vals[p];
      double prev = 1.0, cur = t;
      for (unsigned j = 1; j < 2 * e; ++j) {
        const double next = t * cur - prev;
        prev = cur;
        cur = next;
      }
      out *= cur;
    }
    return out;
  };
  double max_err = 0.0;
  for (std::uint64_t n = 1; n <= check_to; ++n) {
    double oracle = 0.0;
    for (std::uint64_t d = 1; d * d <= n; ++d)
      if (n % (d * d) == 0) oracle += lambda_f_of_square(n / (d * d));
    max_err = std::max(max_err, std::abs(oracle - s.vals[n]));
  }
  require(max_err <= 1e-9, errc::internal,
          "sym2_series: Euler-product and divisor-sum routes disagree by " + std::to_string(max_err));
  return s;
}

CoefficientSeries sym2_series(std::uint64_t N) { return sym2_series(hecke_normalized(N)); }

CoefficientSeries mobius(std::uint64_t N) {
  CoefficientSeries s;
  s.N = N;
  s.norm = Normalization::arithmetic;
  s.label = "mobius";
  s.ints.assign(N + 1, 0);
  s.vals.assign(N + 1, 0.0);
  std::vector<int> mu(N + 1, 1);
  std::vector<bool> composite(N + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= N; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (std::uint64_t p : primes) {
      if (i * p > N) break;
      composite[i * p] = true;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  for (std::uint64_t n = 1; n <= N; ++n) {
    s.ints[n] = mu[n];
    s.vals[n] = static_cast<double>(mu[n]);
  }
  return s;
}

CoefficientSeries dirichlet_convolve(const CoefficientSeries& a, const CoefficientSeries& b,
                                     std::uint64_t N, const std::string& label) {
  require(a.N >= N && b.N >= N, errc::invalid_argument, "dirichlet_convolve: inputs too short");
  CoefficientSeries s;
  s.N = N;
  s.norm = Normalization::unitary;
  s.label = label;
  s.vals.assign(N + 1, 0.0);
  for (std::uint64_t l = 1; l <= N; ++l) {
    const double al = a.vals[l];
    if (al == 0.0) continue;
    for (std::uint64_t m = 1; m <= N / l; ++m) s.vals[l * m] += al * b.vals[m];
  }
  return s;
}

CoefficientSeries one_boxplus(const CoefficientSeries& lam_pi, std::uint64_t N) {
  require(lam_pi.N >= N, errc::invalid_argument, "one_boxplus: input series too short");
  CoefficientSeries s;
  s.N = N;
  s.norm = Normalization::unitary;
  s.label = "1_boxplus_" + lam_pi.label;
  s.vals.assign(N + 1, 0.0);
  for (std::uint64_t m = 1; m <= N; ++m) {
    const double v = lam_pi.vals[m];
    for (std::uint64_t k = m; k <= N; k += m) s.vals[k] += v;
  }
  return s;
}

CoefficientSeries rankin_selberg_series(const CoefficientSeries& hecke) {
  CoefficientSeries s;
  s.N = hecke.N;
  s.norm = Normalization::unitary;
  s.label = "lambda_f_sq";
  s.vals.assign(hecke.N + 1, 0.0);
  for (std::uint64_t n = 1; n <= hecke.N; ++n) s.vals[n] = hecke.vals[n] * hecke.vals[n];
  return s;
}

CoefficientSeries rankin_selberg_series(std::uint64_t N) {
  return rankin_selberg_series(hecke_normalized(N));
}

double verify_convolution_identity(std::uint64_t N) {
  const CoefficientSeries hecke = hecke_normalized(N);
  const CoefficientSeries sym2 = sym2_series(hecke);
  const CoefficientSeries boxed = one_boxplus(sym2, N);
  const CoefficientSeries mu = mobius(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(N))) + 1);

  double max_err = 0.0;
  std::vector<double> rhs(N + 1, 0.0);
  for (std::uint64_t d = 1; d * d <= N; ++d) {
    const double mud = mu.vals[d];
    if (mud == 0.0) continue;
    const std::uint64_t dd = d * d;
    for (std::uint64_t k = 1; k <= N / dd; ++k) rhs[dd * k] += mud * boxed.vals[k];
  }
  for (std::uint64_t n = 1; n <= N; ++n) {
    const double lhs = hecke.vals[n] * hecke.vals[n];
    max_err = std::max(max_err, std::abs(lhs - rhs[n]));
  }
  return max_err;
}

bool verify_convolution_symbolic(unsigned jmax) {
  const IntPoly t = IntPoly::t();
  const IntPoly one = IntPoly::constant(1);
  const IntPoly e1 = t * t - one;

  // Hecke powers: u_0 = 1, u_1 = t, u_{j+1} = t u_j - u_{j-1}.
  std::vector<IntPoly> u = {one, t};
  for (unsigned j = 2; j <= jmax; ++j) u.push_back(t * u[j - 1] - u[j - 2]);

  // Local symmetric-square powers.
  std::vector<IntPoly> c = {one};
  {
    IntPoly c1 = IntPoly::constant(0), c2 = IntPoly::constant(0), c3 = IntPoly::constant(0);
    c1 = one;
    for (unsigned j = 1; j <= jmax; ++j) {
      IntPoly c0 = sym2_power_step(e1, c1, c2, c3);
      c.push_back(c0);
      c3 = c2;
      c2 = c1;
      c1 = c0;
    }
  }

  // At n = p^j the convolution identity collapses to u_j^2 = c_j + c_{j-1}.
  for (unsigned j = 1; j <= jmax; ++j) {
    if (!(u[j] * u[j] == c[j] + c[j - 1])) return false;
  }
  return (u[0] * u[0] == c[0]);
}

std::vector<RankinSelbergRow> rankin_selberg_report(double X) {
  require(X >= 1.0, errc::invalid_argument, "rankin_selberg_report: X must be >= 1");
  const std::uint64_t N = static_cast<std::uint64_t>(X);
  const CoefficientSeries sym2 = sym2_series(N);
  std::vector<RankinSelbergRow> rows;
  KahanSum acc;
  std::uint64_t next_dyadic = 1;
  for (std::uint64_t m = 1; m <= N; ++m) {
    acc.add(sym2.vals[m] * sym2.vals[m]);
    if (m == next_dyadic) {
      rows.push_back({static_cast<double>(m), acc.value() / static_cast<double>(m)});
      next_dyadic *= 2;
    }
  }
  return rows;
}

}  // namespace aplab
