#pragma once

// Small numeric helpers: compensated sums and a counter-based Gaussian source.

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <utility>

namespace sre {

using cplx = std::complex<double>;

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stateless stream keyed by a tuple of integers: the i-th draw depends only
/// on (key, i), so samples are independent of generation order.
class KeyedStream {
 public:
  KeyedStream(std::initializer_list<std::uint64_t> key) noexcept {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (auto k : key) h = splitmix64(h ^ splitmix64(k));
    key_ = h;
  }

  std::uint64_t bits() noexcept { return splitmix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

  /// Uniform on (0, 1).
  double uniform() noexcept { return (static_cast<double>(bits() >> 11) + 0.5) * 0x1.0p-53; }

  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() noexcept {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

  double normal() noexcept { return normal_pair().first; }

  /// Complex normal with E|z|^2 = 1.
  cplx complex_normal() noexcept {
    auto [a, b] = normal_pair();
    return {a * std::numbers::sqrt2 / 2, b * std::numbers::sqrt2 / 2};
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace sre
