#include "aplab/ntt.hpp"

#include <array>
#include <cstdint>

namespace aplab::ntt {

namespace {

using u64 = std::uint64_t;

struct NttPrime {
  u64 p;
  u64 root;  // primitive root of p
};

// High 2-adicity primes below 2^63 (so Montgomery stays inside 128 bits);
// transforms up to 2^26 work for all three, and the combined modulus is
// ~2.1e56.
constexpr std::array<NttPrime, 3> kPrimes = {{
    {7097673012735901697ull, 3ull},  // 197 * 2^55 + 1
    {6269010681299730433ull, 5ull},  // 87 * 2^56 + 1
    {4719772409484279809ull, 3ull},  // 131 * 2^55 + 1
}};

constexpr std::size_t kNumPrimes = kPrimes.size();
constexpr std::size_t kMaxLen = 1ull << 26;

// Montgomery arithmetic mod a 64-bit odd prime with R = 2^64.
struct Mont {
  u64 p;
  u64 ninv;  // -p^{-1} mod 2^64
  u64 r2;    // 2^128 mod p

  explicit Mont(u64 prime) : p(prime) {
    u64 inv = 1;
    for (int i = 0; i < 6; ++i) inv *= 2u - p * inv;  // Newton: p^{-1} mod 2^64
    ninv = ~inv + 1u;
    const u64 r = (~u64{0} % p) + 1;  // 2^64 mod p
    r2 = static_cast<u64>((static_cast<u128>(r) * r) % p);
  }

  u64 reduce(u128 t) const {
    u64 m = static_cast<u64>(t) * ninv;
    u64 r = static_cast<u64>((t + static_cast<u128>(m) * p) >> 64);
    return r >= p ? r - p : r;
  }
  u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
  u64 to_mont(u64 x) const { return mul(x, r2); }
  u64 from_mont(u64 x) const { return reduce(x); }
  u64 add(u64 a, u64 b) const {
    u64 r = a + b;
    return r >= p ? r - p : r;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (p - b); }
  u64 pow(u64 base_mont, u64 exp) const {
    u64 r = to_mont(1);
    u64 b = base_mont;
    while (exp > 0) {
      if (exp & 1) r = mul(r, b);
      b = mul(b, b);
      exp >>= 1;
    }
    return r;
  }
};

void ntt_inplace(std::vector<u64>& a, const Mont& mont, u64 root_mont, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    u64 w = mont.pow(root_mont, (mont.p - 1) / len);
    if (inverse) w = mont.pow(w, mont.p - 2);
    const std::size_t half = len >> 1;
    for (std::size_t i = 0; i < n; i += len) {
      u64 wk = mont.to_mont(1);
      for (std::size_t k = 0; k < half; ++k) {
        u64 u = a[i + k];
        u64 v = mont.mul(a[i + k + half], wk);
        a[i + k] = mont.add(u, v);
        a[i + k + half] = mont.sub(u, v);
        wk = mont.mul(wk, w);
      }
    }
  }
  if (inverse) {
    u64 n_inv = mont.pow(mont.to_mont(n % mont.p), mont.p - 2);
    for (auto& x : a) x = mont.mul(x, n_inv);
  }
}

u64 residue_of(i128 v, u64 p) {
  i128 r = v % static_cast<i128>(p);
  if (r < 0) r += p;
  return static_cast<u64>(r);
}

// Product residues mod every prime; primes run in parallel when the worker
// cap allows, and the result is identical either way.
std::array<std::vector<u64>, kNumPrimes> product_residues(const std::vector<i128>& a,
                                                          const std::vector<i128>& b,
                                                          std::size_t out_len, std::size_t n) {
  std::array<std::vector<u64>, kNumPrimes> res;
  parallel_for(kNumPrimes, [&](std::size_t pi) {
    const Mont mont(kPrimes[pi].p);
    const u64 root_mont = mont.to_mont(kPrimes[pi].root);

    std::vector<u64> fa(n, 0), fb;
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = mont.to_mont(residue_of(a[i], mont.p));
    ntt_inplace(fa, mont, root_mont, false);
    if (&a == &b) {
      for (auto& x : fa) x = mont.mul(x, x);
    } else {
      fb.assign(n, 0);
      for (std::size_t i = 0; i < b.size(); ++i) fb[i] = mont.to_mont(residue_of(b[i], mont.p));
      ntt_inplace(fb, mont, root_mont, false);
      for (std::size_t i = 0; i < n; ++i) fa[i] = mont.mul(fa[i], fb[i]);
    }
    ntt_inplace(fa, mont, root_mont, true);

    res[pi].resize(out_len);
    for (std::size_t i = 0; i < out_len; ++i) res[pi][i] = mont.from_mont(fa[i]);
  });
  return res;
}

// Garner mixed-radix reconstruction shared by the exact and rounded outputs.
struct Crt {
  std::array<Mont, kNumPrimes> monts;
  u64 pp[kNumPrimes][kNumPrimes];  // pp[i][j] = p_0 ... p_{j-1} mod p_i
  std::array<u64, kNumPrimes> prefix_inv_mont;
  u128 prefix_u128[kNumPrimes];
  long double prefix_ld[kNumPrimes];
  u128 product_u128;
  long double product_ld;

  Crt() : monts{Mont(kPrimes[0].p), Mont(kPrimes[1].p), Mont(kPrimes[2].p)} {
    for (std::size_t i = 0; i < kNumPrimes; ++i) {
      u64 m = 1;
      for (std::size_t j = 0; j < kNumPrimes; ++j) {
        pp[i][j] = m;
        m = static_cast<u64>((static_cast<u128>(m) * (kPrimes[j].p % kPrimes[i].p)) %
                             kPrimes[i].p);
      }
    }
    for (std::size_t i = 0; i < kNumPrimes; ++i)
      prefix_inv_mont[i] = monts[i].pow(monts[i].to_mont(pp[i][i]), kPrimes[i].p - 2);
    u128 acc_u = 1;
    long double acc_ld = 1.0L;
    for (std::size_t i = 0; i < kNumPrimes; ++i) {
      prefix_u128[i] = acc_u;
      prefix_ld[i] = acc_ld;
      acc_u *= kPrimes[i].p;  // wraps mod 2^128 at the last step, by design
      acc_ld *= static_cast<long double>(kPrimes[i].p);
    }
    product_u128 = acc_u;
    product_ld = acc_ld;
  }

  template <typename Out, typename Fn>
  void reconstruct(const std::array<std::vector<u64>, kNumPrimes>& res, std::size_t out_len,
                   std::vector<Out>& out, Fn&& combine) const {
    out.resize(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
      u64 digits[kNumPrimes];
      u128 value_u = 0;
      long double value_ld = 0.0L;
      for (std::size_t pi = 0; pi < kNumPrimes; ++pi) {
        const Mont& mont = monts[pi];
        u128 partial = 0;
        for (std::size_t j = 0; j < pi; ++j)
          partial += static_cast<u128>(digits[j] % mont.p) * pp[pi][j];
        const u64 r = res[pi][i];
        const u64 diff = mont.sub(r, static_cast<u64>(partial % mont.p));
        const u64 digit = mont.from_mont(mont.mul(mont.to_mont(diff), prefix_inv_mont[pi]));
        digits[pi] = digit;
        value_u += prefix_u128[pi] * digit;
        value_ld += prefix_ld[pi] * static_cast<long double>(digit);
      }
      out[i] = combine(value_u, value_ld);
    }
  }
};

const Crt& crt() {
  static const Crt instance;
  return instance;
}

std::size_t plan_length(const std::vector<i128>& a, const std::vector<i128>& b, std::size_t trunc,
                        std::size_t& out_len) {
  require(!a.empty() && !b.empty() && trunc > 0, errc::invalid_argument,
          "ntt multiply: empty input");
  const std::size_t full = a.size() + b.size() - 1;
  out_len = std::min(trunc, full);
  std::size_t n = 1;
  while (n < full) n <<= 1;
  require(n <= kMaxLen, errc::resource_limit, "ntt multiply: transform too long");
  return n;
}

}  // namespace

std::vector<i128> multiply_trunc(const std::vector<i128>& a, const std::vector<i128>& b,
                                 std::size_t trunc) {
  std::size_t out_len = 0;
  const std::size_t n = plan_length(a, b, trunc, out_len);
  const auto res = product_residues(a, b, out_len, n);
  const Crt& c = crt();
  std::vector<i128> out;
  // The true value fits i128, so arithmetic mod 2^128 plus a long-double
  // magnitude estimate for the sign recovers it exactly (the combined modulus
  // dwarfs the signed-128 range, leaving the sign test huge slack).
  c.reconstruct(res, out_len, out, [&](u128 value_u, long double value_ld) {
    return value_ld > c.product_ld * 0.5L ? static_cast<i128>(value_u - c.product_u128)
                                          : static_cast<i128>(value_u);
  });
  return out;
}

std::vector<i128> square_trunc(const std::vector<i128>& a, std::size_t trunc) {
  return multiply_trunc(a, a, trunc);
}

std::vector<long double> multiply_trunc_rounded(const std::vector<i128>& a,
                                                const std::vector<i128>& b, std::size_t trunc) {
  std::size_t out_len = 0;
  const std::size_t n = plan_length(a, b, trunc, out_len);
  const auto res = product_residues(a, b, out_len, n);
  const Crt& c = crt();
  std::vector<long double> out;
  c.reconstruct(res, out_len, out, [&](u128, long double value_ld) {
    return value_ld > c.product_ld * 0.5L ? value_ld - c.product_ld : value_ld;
  });
  return out;
}

}  // namespace aplab::ntt
