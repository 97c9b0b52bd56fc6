#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace aplab {

using cplx = std::complex<double>;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class errc {
  invalid_argument,
  not_prime,
  resource_limit,
  tolerance_failure,
  io_failure,
  internal
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

// e(x) = exp(2*pi*i*x)
inline cplx unit_e(double x) { return std::polar(1.0, kTwoPi * x); }

// Neumaier-compensated accumulator; deterministic for a fixed visit order.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanSumC {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

// Deterministic 64-bit generator (splitmix64); identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) {
    u128 m = static_cast<u128>(next()) * n;
    return static_cast<std::uint64_t>(m >> 64);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Process-wide worker cap for parallel loops (1 = sequential).
unsigned worker_count();
void set_worker_count(unsigned n);

// Runs fn(i) for i in [0, n). Work items write disjoint slots, so the result
// does not depend on the number of workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::string to_string_i128(i128 v);

}  // namespace aplab
