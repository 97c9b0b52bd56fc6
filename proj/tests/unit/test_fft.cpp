#include <cmath>

#include "aplab/fft.hpp"
#include "doctest.h"

using namespace aplab;

namespace {

std::vector<cplx> dft_naive(const std::vector<cplx>& x, int sign) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j)
      acc += x[j] * unit_e(sign * static_cast<double>(j * k % n) / static_cast<double>(n));
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_SUITE("fft") {
  TEST_CASE("matches the naive transform on assorted lengths") {
    Rng rng(42);
    for (std::size_t n : {1u, 2u, 3u, 4u, 6u, 10u, 16u, 30u, 97u, 100u, 256u, 498u}) {
      std::vector<cplx> x(n);
      for (auto& v : x) v = {rng.uniform01() - 0.5, rng.uniform01() - 0.5};
      for (int sign : {+1, -1}) {
        const auto fast = fft::dft(x, sign);
        const auto slow = dft_naive(x, sign);
        double err = 0.0;
        for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs(fast[k] - slow[k]));
        CAPTURE(n);
        CHECK(err < 1e-10);
      }
    }
  }

  TEST_CASE("round trip") {
    Rng rng(7);
    std::vector<cplx> x(60);
    for (auto& v : x) v = {rng.uniform01() - 0.5, rng.uniform01() - 0.5};
    auto y = fft::dft(x, +1);
    auto back = fft::dft(y, -1);
    for (auto& v : back) v /= static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(back[k] - x[k]) < 1e-12);
  }

  TEST_CASE("cyclic power equals repeated naive convolution") {
    Rng rng(3);
    std::vector<cplx> c(12);
    for (auto& v : c) v = {rng.uniform01() - 0.5, rng.uniform01() - 0.5};
    std::vector<cplx> ref = c;
    for (unsigned step = 1; step < 3; ++step) {
      std::vector<cplx> next(c.size(), cplx{0.0, 0.0});
      for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) next[(i + j) % c.size()] += ref[i] * c[j];
      ref = next;
    }
    auto fast = fft::cyclic_power(c, 3);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(std::abs(fast[k] - ref[k]) < 1e-11);
  }
}
