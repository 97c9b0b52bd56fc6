#include <cmath>

#include "aplab/field.hpp"
#include "doctest.h"

using namespace aplab;

TEST_SUITE("field") {
  TEST_CASE("smallest primitive roots for small primes") {
    CHECK(PrimeContext::create(3)->generator() == 2);
    // brute-force order check over candidates 2, 3, 4
    {
      const std::uint64_t q = 5;
      std::uint64_t expected = 0;
      for (std::uint64_t c = 2; c < q && expected == 0; ++c) {
        std::uint64_t x = 1;
        unsigned order = 0;
        do {
          x = x * c % q;
          ++order;
        } while (x != 1);
        if (order == q - 1) expected = c;
      }
      CHECK(expected == 2);
      CHECK(PrimeContext::create(q)->generator() == expected);
    }
    {
      const std::uint64_t q = 7;
      std::uint64_t expected = 0;
      for (std::uint64_t c = 2; c < q && expected == 0; ++c) {
        std::uint64_t x = 1;
        unsigned order = 0;
        do {
          x = x * c % q;
          ++order;
        } while (x != 1);
        if (order == q - 1) expected = c;
      }
      CHECK(expected == 3);
      CHECK(PrimeContext::create(q)->generator() == expected);
    }
  }

  TEST_CASE("rejects non-prime and even moduli") {
    CHECK_THROWS_AS(PrimeContext::create(1), Error);
    CHECK_THROWS_AS(PrimeContext::create(2), Error);
    CHECK_THROWS_AS(PrimeContext::create(9), Error);
    CHECK_THROWS_AS(PrimeContext::create(91), Error);  // 7 * 13
  }

  TEST_CASE("table invariants") {
    auto ctx = PrimeContext::create(101);
    const std::uint64_t q = ctx->q();
    for (std::uint64_t x = 1; x < q; ++x) {
      CHECK(pow_mod(ctx->generator(), ctx->dlog(x), q) == x);
      CHECK(x * ctx->inverse(x) % q == 1);
    }
    // dlog round-trip
    for (std::uint64_t k = 0; k + 1 < q; ++k)
      CHECK(ctx->dlog(pow_mod(ctx->generator(), k, q)) == k);
  }

  TEST_CASE("additive character") {
    auto ctx = PrimeContext::create(5);
    CHECK(std::abs(ctx->additive_char(0) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(ctx->additive_char(5) - cplx{1.0, 0.0}) < 1e-15);  // periodicity
    const cplx expected{std::cos(kTwoPi / 5.0), std::sin(kTwoPi / 5.0)};
    CHECK(std::abs(ctx->additive_char(1) - expected) < 1e-15);
    CHECK(std::abs(ctx->additive_char(1) - cplx{0.309017, 0.951057}) < 1e-6);
    for (std::int64_t x = -12; x < 12; ++x) CHECK(std::abs(std::abs(ctx->additive_char(x)) - 1.0) < 1e-15);
  }

  TEST_CASE("character values and multiplicativity") {
    auto ctx = PrimeContext::create(31);
    const std::uint64_t q = ctx->q();
    DirichletCharacter chi0(ctx, 0);
    for (std::uint64_t n = 1; n < q; ++n) CHECK(std::abs(chi0(n) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(chi0(0)) == 0.0);

    DirichletCharacter chi(ctx, 7);
    CHECK(std::abs(chi(ctx->generator()) - unit_e(7.0 / static_cast<double>(q - 1))) < 1e-14);
    for (std::uint64_t m = 1; m < q; ++m)
      for (std::uint64_t n = 1; n < q; ++n)
        CHECK(std::abs(chi(m * n) - chi(m) * chi(n)) < 1e-12);
  }

  TEST_CASE("character sum and orthogonality") {
    auto ctx = PrimeContext::create(23);
    const std::uint64_t q = ctx->q();
    for (std::uint64_t j : {1ull, 2ull, 9ull, 21ull}) {
      DirichletCharacter chi(ctx, j);
      cplx total{0.0, 0.0};
      for (std::uint64_t n = 0; n < q; ++n) total += chi(n);
      CHECK(std::abs(total) < 1e-12);
    }
    // (1/phi) sum_chi chi(m) conj(chi(n)) = [m == n] on units
    for (std::uint64_t m : {1ull, 5ull}) {
      for (std::uint64_t n : {1ull, 5ull, 7ull}) {
        cplx total{0.0, 0.0};
        for (std::uint64_t j = 0; j + 1 < q; ++j) {
          DirichletCharacter chi(ctx, j);
          total += chi(m) * std::conj(chi(n));
        }
        total /= static_cast<double>(q - 1);
        const double expect = m == n ? 1.0 : 0.0;
        CHECK(std::abs(total - cplx{expect, 0.0}) < 1e-10);
      }
    }
  }

  TEST_CASE("character parity") {
    auto ctx = PrimeContext::create(13);
    for (std::uint64_t j = 0; j + 1 < 13; ++j) {
      DirichletCharacter chi(ctx, j);
      const cplx at_minus1 = chi(-1);
      if (chi.parity() == 0)
        CHECK(std::abs(at_minus1 - cplx{1.0, 0.0}) < 1e-12);
      else
        CHECK(std::abs(at_minus1 + cplx{1.0, 0.0}) < 1e-12);
    }
  }

  TEST_CASE("primality and next prime") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(997));
    CHECK(!is_prime_u64(1));
    CHECK(!is_prime_u64(561));  // Carmichael
    CHECK(next_prime_at_least(63) == 67);
    CHECK(next_prime_at_least(191) == 191);
  }
}
