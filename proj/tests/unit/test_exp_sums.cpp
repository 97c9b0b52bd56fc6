#include <cmath>

#include "aplab/exp_sums.hpp"
#include "doctest.h"

using namespace aplab;

TEST_SUITE("exp_sums") {
  TEST_CASE("kl_brute basics") {
    auto ctx5 = PrimeContext::create(5);
    // d = 1 is the additive character on units
    for (std::uint64_t n = 1; n < 5; ++n)
      CHECK(std::abs(kl_brute(1, n, *ctx5) - ctx5->additive_char_u(n)) < 1e-15);
    // d = 2, n = 1, q = 5: (2 + 2 cos(4 pi/5)) / sqrt(5)
    const double expected = (2.0 + 2.0 * std::cos(4.0 * kPi / 5.0)) / std::sqrt(5.0);
    CHECK(std::abs(kl_brute(2, 1, *ctx5) - cplx{expected, 0.0}) < 1e-13);
    CHECK(std::abs(expected - 0.170820) < 1e-6);
    // no unit solutions above 0
    CHECK(std::abs(kl_brute(4, 0, *ctx5)) == 0.0);
    // resource guard
    auto big = PrimeContext::create(1009);
    CHECK_THROWS_AS(kl_brute(4, 1, *big), Error);
  }

  TEST_CASE("recursive table matches brute force") {
    for (std::uint64_t q : {5ull, 7ull, 11ull}) {
      auto ctx = PrimeContext::create(q);
      for (unsigned d : {1u, 2u, 3u}) {
        auto table = kl_table_recursive(d, ctx);
        REQUIRE(table.values.size() == q);
        for (std::uint64_t n = 0; n < q; ++n)
          CHECK(std::abs(table.at(n) - kl_brute(d, n, *ctx)) <= 1e-12);
      }
    }
    auto ctx7 = PrimeContext::create(7);
    auto t3 = kl_table_recursive(3, ctx7);
    double max_err = 0.0;
    for (std::uint64_t n = 0; n < 7; ++n)
      max_err = std::max(max_err, std::abs(t3.at(n) - kl_brute(3, n, *ctx7)));
    CHECK(max_err <= 1e-12);
  }

  TEST_CASE("fft table matches recursive table") {
    for (std::uint64_t q : {3ull, 5ull, 31ull, 101ull}) {
      auto ctx = PrimeContext::create(q);
      for (unsigned d : {1u, 2u, 3u, 4u, 5u}) {
        auto a = kl_table_recursive(d, ctx);
        auto b = kl_table_fft(d, ctx);
        double err = 0.0;
        for (std::uint64_t n = 0; n < q; ++n) err = std::max(err, std::abs(a.at(n) - b.at(n)));
        CAPTURE(q);
        CAPTURE(d);
        CHECK(err <= 1e-10);
      }
    }
  }

  TEST_CASE("table symmetries") {
    auto ctx = PrimeContext::create(97);
    for (unsigned d : {2u, 3u, 4u}) {
      auto t = kl_table_fft(d, ctx);
      CHECK(std::abs(t.at(0)) == 0.0);
      double max_dev = 0.0;
      for (std::uint64_t n = 0; n < 97; ++n) {
        const std::uint64_t mirrored = d % 2 == 0 ? n : (97 - n) % 97;
        max_dev = std::max(max_dev, std::abs(std::conj(t.at(n)) - t.at(mirrored)));
      }
      CHECK(max_dev <= 1e-10);  // conj(Kl_d(n)) = Kl_d((-1)^d n)
      if (d % 2 == 0) {
        double max_imag = 0.0;
        for (const auto& v : t.values) max_imag = std::max(max_imag, std::abs(v.imag()));
        CHECK(max_imag <= 1e-10);
      }
      // Deligne bound
      double max_abs = 0.0;
      for (const auto& v : t.values) max_abs = std::max(max_abs, std::abs(v));
      CHECK(max_abs / d <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("fourier transform on Z/qZ") {
    auto ctx = PrimeContext::create(53);
    const std::uint64_t q = ctx->q();
    Rng rng(11);
    TraceTable table{ctx, std::vector<cplx>(q), "random"};
    for (auto& v : table.values) v = {rng.uniform01() - 0.5, rng.uniform01() - 0.5};

    auto hat = fourier_zq(table);
    double norm_in = 0.0, norm_out = 0.0;
    for (std::uint64_t n = 0; n < q; ++n) {
      norm_in += std::norm(table.at(n));
      norm_out += std::norm(hat.at(n));
    }
    CHECK(std::abs(norm_in - norm_out) <= 1e-10 * norm_in);  // Parseval

    auto twice = fourier_zq(hat);
    for (std::uint64_t n = 0; n < q; ++n)
      CHECK(std::abs(twice.at(n) - table.at((q - n) % q)) <= 1e-10);  // inversion

    // spike at a transforms to e(na/q)
    const std::uint64_t a = 17;
    TraceTable spike{ctx, std::vector<cplx>(q, cplx{0.0, 0.0}), "spike"};
    spike.values[a] = std::sqrt(static_cast<double>(q));
    auto spike_hat = fourier_zq(spike);
    for (std::uint64_t n = 0; n < q; ++n)
      CHECK(std::abs(spike_hat.at(n) - ctx->additive_char_u(n * a % q)) <= 1e-12);
  }

  TEST_CASE("gauss sums") {
    auto ctx = PrimeContext::create(41);
    const std::uint64_t q = ctx->q();
    DirichletCharacter chi0(ctx, 0);
    CHECK(std::abs(gauss_sum(chi0) - cplx{-1.0 / std::sqrt(static_cast<double>(q)), 0.0}) < 1e-13);
    auto all = gauss_sums_all(ctx);
    REQUIRE(all.size() == q - 1);
    for (std::uint64_t j = 0; j + 1 < q; ++j) {
      DirichletCharacter chi(ctx, j);
      CHECK(std::abs(all[j] - gauss_sum(chi)) < 1e-12);
      if (j != 0) CHECK(std::abs(std::abs(all[j]) - 1.0) <= 1e-10);
    }
  }

  TEST_CASE("gauss spectral identity") {
    for (std::uint64_t q : {5ull, 13ull, 101ull}) {
      auto ctx = PrimeContext::create(q);
      CHECK(gauss_spectral_check(ctx) <= 1e-9);
    }
  }

  TEST_CASE("kl4 fourier identity") {
    auto ctx5 = PrimeContext::create(5);
    CHECK(verify_kl4_hat(ctx5, 1, 1) <= 1e-12);
    // the transform at 0 equals q^{-2}
    auto kl4 = kl_table_fft(4, ctx5);
    auto hat = fourier_zq(kl4);
    CHECK(std::abs(hat.at(0) - cplx{1.0 / 25.0, 0.0}) <= 1e-12);
  }

  TEST_CASE("kl4 fourier identity across moduli") {
    for (std::uint64_t q : {7ull, 31ull, 101ull}) {
      auto ctx = PrimeContext::create(q);
      auto kl4 = kl_table_fft(4, ctx);
      auto kl3 = kl_table_fft(3, ctx);
      Rng rng(q);
      for (int trial = 0; trial < 3; ++trial) {
        const std::uint64_t a = 1 + rng.below(q - 1);
        const std::uint64_t l = 1 + rng.below(q - 1);
        CHECK(verify_kl4_hat(ctx, a, l, &kl4, &kl3) <= 1e-9);
      }
    }
  }

  TEST_CASE("correlation sums") {
    auto ctx = PrimeContext::create(37);
    const std::uint64_t q = ctx->q();
    auto kl4 = kl_table_fft(4, ctx);

    // diagonal at mtilde = 0 is the positive power sum
    const cplx diag = correlation_sum(ctx, 2, 0, 5, 5, &kl4);
    CHECK(diag.real() > 0.0);
    CHECK(std::abs(diag.imag()) < 1e-12);

    // Parseval: sum_mt |C|^2 = sum over units of |Kl4(a l1 x)|^2 |Kl4(a l2 x)|^2
    const std::uint64_t a = 2, l1 = 5, l2 = 11;
    auto row = correlation_row(ctx, a, l1, l2, &kl4);
    double lhs = 0.0;
    for (const auto& v : row) lhs += std::norm(v);
    double rhs = 0.0;
    for (std::uint64_t x = 1; x < q; ++x)
      rhs += std::norm(kl4.at(ctx->mul(ctx->mul(a, l1), x))) *
             std::norm(kl4.at(ctx->mul(ctx->mul(a, l2), x)));
    CHECK(std::abs(lhs - rhs) <= 1e-9 * rhs);
  }

  TEST_CASE("trace table csv") {
    auto ctx = PrimeContext::create(5);
    auto t = kl_table_fft(2, ctx);
    const std::string csv = trace_table_csv(t);
    CHECK(csv.find("# q=5 label=Kl2") == 0);
    CHECK(csv.find("n,re,im") != std::string::npos);
  }
}
