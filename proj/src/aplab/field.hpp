#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "aplab/common.hpp"

namespace aplab {

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);
std::uint64_t next_prime_at_least(std::uint64_t n);

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// Arithmetic over Z/qZ for an odd prime q: smallest primitive root, discrete
// logarithm and inverse tables, and the additive character table e(x/q).
// Immutable after construction; share freely across threads.
class PrimeContext {
 public:
  static std::shared_ptr<const PrimeContext> create(std::uint64_t q);

  std::uint64_t q() const { return q_; }
  std::uint64_t generator() const { return g_; }

  // g^dlog(x) == x (mod q) for units x.
  std::uint32_t dlog(std::uint64_t x) const { return dlog_[x]; }
  std::uint64_t inverse(std::uint64_t x) const { return inv_[x]; }
  bool is_unit(std::uint64_t x) const { return x % q_ != 0; }
  std::uint64_t reduce(std::int64_t x) const {
    std::int64_t r = x % static_cast<std::int64_t>(q_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
  }

  // e(x/q); x is reduced mod q first.
  cplx additive_char(std::int64_t x) const { return e_table_[reduce(x)]; }
  cplx additive_char_u(std::uint64_t x_mod_q) const { return e_table_[x_mod_q]; }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % q_);
  }

 private:
  PrimeContext() = default;

  std::uint64_t q_ = 0;
  std::uint64_t g_ = 0;
  std::vector<std::uint32_t> dlog_;
  std::vector<std::uint32_t> inv_;
  std::vector<cplx> e_table_;
};

using CtxPtr = std::shared_ptr<const PrimeContext>;

// chi_j on (Z/qZ)^x, defined by chi_j(g) = e(j/(q-1)); zero off the units.
class DirichletCharacter {
 public:
  DirichletCharacter(CtxPtr ctx, std::uint64_t j);

  cplx operator()(std::int64_t n) const;
  std::uint64_t index() const { return j_; }
  // 0 if chi(-1) = 1, else 1.
  int parity() const { return static_cast<int>(j_ & 1); }
  const PrimeContext& context() const { return *ctx_; }

 private:
  CtxPtr ctx_;
  std::uint64_t j_;
  std::vector<cplx> root_table_;  // e(k/(q-1)) for k in [0, q-1)
};

}  // namespace aplab
