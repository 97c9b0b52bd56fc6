#include <cmath>
#include <numeric>

#include "aplab/coefficients.hpp"
#include "aplab/csvio.hpp"
#include "aplab/field.hpp"
#include "doctest.h"

using namespace aplab;

namespace {

// Independent expansion of x * prod_{m>=1} (1 - x^m)^24 by shift-subtract
// products, nothing shared with the production path.
std::vector<i128> tau_oracle(std::size_t N) {
  std::vector<i128> phi(N, 0);
  phi[0] = 1;
  for (std::size_t m = 1; m < N; ++m)
    for (std::size_t i = N - 1; i >= m; --i) phi[i] -= phi[i - m];
  std::vector<i128> acc(N, 0);
  acc[0] = 1;
  for (int rep = 0; rep < 24; ++rep) {
    std::vector<i128> next(N, 0);
    for (std::size_t i = 0; i < N; ++i) {
      if (acc[i] == 0) continue;
      for (std::size_t j = 0; i + j < N; ++j) next[i + j] += acc[i] * phi[j];
    }
    acc = std::move(next);
  }
  std::vector<i128> tau(N + 1, 0);
  for (std::size_t n = 1; n <= N; ++n) tau[n] = acc[n - 1];
  return tau;
}

}  // namespace

TEST_SUITE("coefficients") {
  TEST_CASE("tau matches an independent expansion") {
    const std::size_t N = 600;
    const auto oracle = tau_oracle(N);
    const auto tau = ramanujan_tau(N);
    for (std::size_t n = 1; n <= N; ++n) CHECK(tau.ints[n] == oracle[n]);
    CHECK(tau.ints[1] == 1);
    CHECK(tau.ints[2] == -24);
    CHECK(tau.ints[3] == 252);
    CHECK(tau.ints[6] == tau.ints[2] * tau.ints[3]);  // -6048
  }

  TEST_CASE("tau Hecke recursion and multiplicativity") {
    const std::uint64_t N = 20000;
    const auto tau = ramanujan_tau(N);
    // recursion tau(p^{k+1}) = tau(p) tau(p^k) - p^11 tau(p^{k-1})
    for (std::uint64_t p = 2; p * p <= N; p = next_prime_at_least(p + 1)) {
      i128 p11 = 1;
      for (int i = 0; i < 11; ++i) p11 *= p;
      std::uint64_t pk = p;
      while (pk * p <= N) {
        CHECK(tau.ints[pk * p] == tau.ints[p] * tau.ints[pk] - p11 * tau.ints[pk / p]);
        pk *= p;
      }
    }
    // multiplicativity on random coprime pairs
    Rng rng(5);
    int checked = 0;
    while (checked < 1000) {
      const std::uint64_t a = 2 + rng.below(300);
      const std::uint64_t b = 2 + rng.below(N / a - 1);
      if (std::gcd(a, b) != 1) continue;
      CHECK(tau.ints[a * b] == tau.ints[a] * tau.ints[b]);
      ++checked;
    }
  }

  TEST_CASE("tau respects the divisor bound") {
    const std::uint64_t N = 5000;
    const auto tau = ramanujan_tau(N);
    for (std::uint64_t n = 1; n <= N; ++n) {
      int divisors = 0;
      for (std::uint64_t d = 1; d * d <= n; ++d)
        if (n % d == 0) divisors += d * d == n ? 1 : 2;
      const double bound = divisors * std::pow(static_cast<double>(n), 5.5);
      CHECK(std::abs(static_cast<double>(tau.ints[n])) <= bound * (1.0 + 1e-12));
    }
  }

  TEST_CASE("hecke normalization") {
    const auto lam = hecke_normalized(1000);
    CHECK(lam.vals[1] == 1.0);
    CHECK(std::abs(lam.vals[2] - (-24.0 / std::pow(2.0, 5.5))) < 1e-12);
    CHECK(std::abs(lam.vals[2] + 0.530330) < 1e-6);
    // lambda(p)^2 = lambda(p^2) + 1
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
      CHECK(std::abs(lam.vals[p] * lam.vals[p] - (lam.vals[p * p] + 1.0)) < 1e-12);
    }
  }

  TEST_CASE("sym2 series") {
    const auto lam = hecke_normalized(10000);
    const auto sym2 = sym2_series(lam);  // construction runs the divisor-sum oracle
    CHECK(sym2.vals[1] == 1.0);
    for (std::uint64_t p = 2; p <= 100; p = next_prime_at_least(p + 1))
      CHECK(std::abs(sym2.vals[p] - (lam.vals[p] * lam.vals[p] - 1.0)) < 1e-12);
  }

  TEST_CASE("mobius and convolutions") {
    const std::uint64_t N = 2000;
    const auto mu = mobius(N);
    CHECK(mu.ints[1] == 1);
    CHECK(mu.ints[2] == -1);
    CHECK(mu.ints[4] == 0);
    CHECK(mu.ints[6] == 1);

    CoefficientSeries ones;
    ones.N = N;
    ones.norm = Normalization::unitary;
    ones.label = "1";
    ones.vals.assign(N + 1, 1.0);
    ones.vals[0] = 0.0;

    // mu * 1 = delta at 1
    const auto delta = dirichlet_convolve(mu, ones, N, "mu*1");
    CHECK(delta.vals[1] == 1.0);
    for (std::uint64_t n = 2; n <= N; ++n) CHECK(delta.vals[n] == 0.0);

    // 1 * 1 = divisor count
    const auto d = dirichlet_convolve(ones, ones, N, "d");
    CHECK(d.vals[6] == 4.0);
    CHECK(d.vals[12] == 6.0);

    // one_boxplus agrees with convolution against ones
    const auto lam = sym2_series(200);
    const auto box = one_boxplus(lam, 200);
    const auto box_conv = dirichlet_convolve(ones, lam, 200, "check");
    for (std::uint64_t n = 1; n <= 200; ++n) CHECK(std::abs(box.vals[n] - box_conv.vals[n]) < 1e-12);
    CHECK(box.vals[1] == 1.0);
    for (std::uint64_t p : {2ull, 3ull, 7ull}) CHECK(std::abs(box.vals[p] - (1.0 + lam.vals[p])) < 1e-12);
    CHECK(std::abs(box.vals[4] - (1.0 + lam.vals[2] + lam.vals[4])) < 1e-12);
  }

  TEST_CASE("convolution identity, numeric and symbolic") {
    CHECK(verify_convolution_identity(5000) <= 1e-9);
    CHECK(verify_convolution_symbolic(8));
  }

  TEST_CASE("rankin-selberg report stays bounded") {
    const auto rows = rankin_selberg_report(10000.0);
    REQUIRE(!rows.empty());
    CHECK(rows.front().x == 1.0);
    CHECK(rows.front().ratio == 1.0);
    for (const auto& row : rows) CHECK(row.ratio < 10.0);
  }

  TEST_CASE("series csv round trip") {
    const auto tau = ramanujan_tau(50);
    const auto back = coefficient_series_from_csv(coefficient_series_csv(tau));
    CHECK(back.N == tau.N);
    CHECK(back.is_arithmetic());
    for (std::uint64_t n = 1; n <= 50; ++n) CHECK(back.ints[n] == tau.ints[n]);

    const auto sym2 = sym2_series(64);
    const auto back2 = coefficient_series_from_csv(coefficient_series_csv(sym2));
    for (std::uint64_t n = 1; n <= 64; ++n) CHECK(back2.vals[n] == doctest::Approx(sym2.vals[n]).epsilon(1e-15));
  }
}
