#include "aplab/field.hpp"

#include <cmath>
#include <string>

namespace aplab {

namespace {

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % m);
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

constexpr std::uint64_t kCtxMaxQ = 1ull << 22;

}  // namespace

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t r = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) r = mul_mod_u64(r, base, mod);
    base = mul_mod_u64(base, base, mod);
    exp >>= 1;
  }
  return r;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t next_prime_at_least(std::uint64_t n) {
  if (n <= 2) return 2;
  if ((n & 1) == 0) ++n;
  while (!is_prime_u64(n)) n += 2;
  return n;
}

std::shared_ptr<const PrimeContext> PrimeContext::create(std::uint64_t q) {
  require(q >= 3, errc::not_prime, "modulus must be an odd prime >= 3, got " + std::to_string(q));
  require(q % 2 == 1, errc::not_prime, "modulus must be odd, got " + std::to_string(q));
  require(is_prime_u64(q), errc::not_prime, std::to_string(q) + " is not prime");
  require(q <= kCtxMaxQ, errc::resource_limit,
          "modulus " + std::to_string(q) + " exceeds the table limit " + std::to_string(kCtxMaxQ));

  auto ctx = std::shared_ptr<PrimeContext>(new PrimeContext());
  ctx->q_ = q;

  const auto factors = prime_factors(q - 1);
  std::uint64_t g = 0;
  for (std::uint64_t cand = 2; cand < q; ++cand) {
    bool primitive = true;
    for (std::uint64_t p : factors) {
      if (pow_mod(cand, (q - 1) / p, q) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      g = cand;
      break;
    }
  }
  require(g != 0, errc::internal, "no primitive root found");
  ctx->g_ = g;

  ctx->dlog_.assign(q, 0);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    ctx->dlog_[x] = static_cast<std::uint32_t>(k);
    x = mul_mod_u64(x, g, q);
  }
  require(x == 1, errc::internal, "generator order mismatch");

  ctx->inv_.assign(q, 0);
  ctx->inv_[1] = 1;
  for (std::uint64_t i = 2; i < q; ++i) {
    // inv[i] = -(q/i) * inv[q mod i] mod q
    std::uint64_t v = mul_mod_u64(q / i, ctx->inv_[q % i], q);
    ctx->inv_[i] = static_cast<std::uint32_t>(q - v);
  }

  ctx->e_table_.resize(q);
  for (std::uint64_t n = 0; n < q; ++n)
    ctx->e_table_[n] = std::polar(1.0, kTwoPi * static_cast<double>(n) / static_cast<double>(q));

  return ctx;
}

DirichletCharacter::DirichletCharacter(CtxPtr ctx, std::uint64_t j) : ctx_(std::move(ctx)) {
  const std::uint64_t order = ctx_->q() - 1;
  j_ = j % order;
  root_table_.resize(order);
  for (std::uint64_t k = 0; k < order; ++k)
    root_table_[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(order));
}

cplx DirichletCharacter::operator()(std::int64_t n) const {
  const std::uint64_t r = ctx_->reduce(n);
  if (r == 0) return {0.0, 0.0};
  const std::uint64_t order = ctx_->q() - 1;
  const std::uint64_t k = static_cast<std::uint64_t>((static_cast<u128>(j_) * ctx_->dlog(r)) % order);
  return root_table_[k];
}

}  // namespace aplab
