#include "aplab/fft.hpp"

#include <bit>
#include <cmath>

namespace aplab::fft {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Chirp value e(sign * t^2 / (2m)) with the square reduced mod 2m first;
// reducing before forming the angle keeps the twiddles exact for large t.
cplx chirp(std::uint64_t t, std::uint64_t m, int sign) {
  std::uint64_t r = static_cast<std::uint64_t>((static_cast<u128>(t) * t) % (2 * m));
  return std::polar(1.0, sign * kPi * static_cast<double>(r) / static_cast<double>(m));
}

std::vector<cplx> bluestein(const std::vector<cplx>& x, int sign) {
  const std::size_t m = x.size();
  const std::size_t len = next_pow2(2 * m - 1);
  std::vector<cplx> a(len, cplx{0.0, 0.0});
  std::vector<cplx> b(len, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < m; ++j) a[j] = x[j] * chirp(j, m, sign);
  for (std::size_t j = 0; j < m; ++j) {
    cplx w = chirp(j, m, -sign);
    b[j] = w;
    if (j != 0) b[len - j] = w;
  }
  pow2_inplace(a, -1);
  pow2_inplace(b, -1);
  for (std::size_t j = 0; j < len; ++j) a[j] *= b[j];
  pow2_inplace(a, +1);
  const double scale = 1.0 / static_cast<double>(len);
  std::vector<cplx> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = a[k] * scale * chirp(k, m, sign);
  return out;
}

}  // namespace

void pow2_inplace(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  require(is_pow2(n), errc::invalid_argument, "pow2_inplace: length must be a power of two");
  if (n == 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    for (std::size_t k = 0; k < half; ++k) {
      // fresh angle per twiddle instead of repeated multiplication
      cplx w = std::polar(1.0, sign * kTwoPi * static_cast<double>(k) / static_cast<double>(len));
      for (std::size_t i = k; i < n; i += len) {
        cplx u = a[i];
        cplx v = a[i + half] * w;
        a[i] = u + v;
        a[i + half] = u - v;
      }
    }
  }
}

std::vector<cplx> dft(const std::vector<cplx>& x, int sign) {
  require(!x.empty(), errc::invalid_argument, "dft: empty input");
  require(sign == 1 || sign == -1, errc::invalid_argument, "dft: sign must be +1 or -1");
  if (x.size() == 1) return x;
  if (is_pow2(x.size())) {
    std::vector<cplx> a = x;
    pow2_inplace(a, sign);
    return a;
  }
  return bluestein(x, sign);
}

std::vector<cplx> cyclic_power(const std::vector<cplx>& c, unsigned d) {
  require(d >= 1, errc::invalid_argument, "cyclic_power: d must be >= 1");
  if (d == 1) return c;
  std::vector<cplx> hat = dft(c, -1);
  for (auto& z : hat) z = std::pow(z, static_cast<int>(d));
  std::vector<cplx> out = dft(hat, +1);
  const double scale = 1.0 / static_cast<double>(c.size());
  for (auto& z : out) z *= scale;
  return out;
}

}  // namespace aplab::fft
