#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace colhyp::detail {

/// Truncated Taylor expansion f(z0 + h) = sum_k c[k] h^k, k <= N.
///
/// Enough arithmetic to differentiate the smooth cut-off function exactly.
template <std::size_t N>
struct Jet {
  std::array<double, N + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }

  /// k-th derivative at the expansion point.
  double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c[k] * f;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t k = 0; k <= N; ++k) a.c[k] += b.c[k];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (std::size_t k = 0; k <= N; ++k) a.c[k] -= b.c[k];
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k <= N; ++k)
      for (std::size_t i = 0; i <= k; ++i) r.c[k] += a.c[i] * b.c[k - i];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k <= N; ++k) {
      double s = a.c[k];
      for (std::size_t i = 1; i <= k; ++i) s -= b.c[i] * r.c[k - i];
      r.c[k] = s / b.c[0];
    }
    return r;
  }
  friend Jet exp(const Jet& a) {
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
      double s = 0.0;
      for (std::size_t i = 1; i <= k; ++i) s += static_cast<double>(i) * a.c[i] * r.c[k - i];
      r.c[k] = s / static_cast<double>(k);
    }
    return r;
  }
};

}  // namespace colhyp::detail
