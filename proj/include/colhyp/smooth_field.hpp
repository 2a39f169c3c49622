#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colhyp/grid.hpp"

namespace colhyp {

/// Closed rectangle [x_lo, x_hi] x [t_lo, t_hi]; infinite bounds allowed.
struct Rect {
  double x_lo = -std::numeric_limits<double>::infinity();
  double x_hi = std::numeric_limits<double>::infinity();
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();

  static Rect everywhere() { return {}; }
  static Rect x_interval(double lo, double hi) { return Rect{lo, hi}; }
  static Rect t_interval(double lo, double hi) {
    Rect r;
    r.t_lo = lo;
    r.t_hi = hi;
    return r;
  }

  bool contains(double x, double t, double slack = 1e-12) const noexcept {
    return x >= x_lo - slack && x <= x_hi + slack && t >= t_lo - slack && t <= t_hi + slack;
  }
  Rect intersect(const Rect& o) const noexcept;
  bool empty() const noexcept { return x_lo > x_hi || t_lo > t_hi; }
};

/// Which coordinates a field actually depends on; derivatives along the others vanish.
enum class Dependence : std::uint8_t { none, x, t, xt };

enum class Axis : std::uint8_t { x, t };

/// Where a representative came from: mollifier scale, sample seed, source description.
struct Provenance {
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::string source;
};

/// One smooth function u(x, t) on a rectangle, with partial derivatives on demand.
///
/// This is a single representative u_eps(., omega) at fixed (eps, omega). Instances are
/// immutable and cheap to copy (shared implementation); evaluation is thread-safe.
class SmoothField {
 public:
  /// eval(x, t, dx, dt) returns d^dx/dx^dx d^dt/dt^dt u at (x, t).
  using Evaluator = std::function<double(double, double, int, int)>;

  SmoothField(Rect domain, Evaluator eval, Provenance provenance = {},
              Dependence dependence = Dependence::xt, int max_order = 8);

  static SmoothField constant(double c, Rect domain = Rect::everywhere());
  /// Field depending on x only; f(x, k) is the k-th derivative.
  static SmoothField of_x(std::function<double(double, int)> f, Rect domain = Rect::everywhere(),
                          Provenance provenance = {}, int max_order = 8);
  static SmoothField of_t(std::function<double(double, int)> f, Rect domain = Rect::everywhere(),
                          Provenance provenance = {}, int max_order = 8);

  double operator()(double x, double t) const { return derivative(x, t, 0, 0); }
  /// Throws DomainError outside the domain and ParameterError past max_order.
  double derivative(double x, double t, int dx, int dt) const;

  const Rect& domain() const noexcept { return impl_->domain; }
  const Provenance& provenance() const noexcept { return impl_->provenance; }
  Dependence dependence() const noexcept { return impl_->dependence; }
  int max_order() const noexcept { return impl_->max_order; }
  /// Set when the field is known to be constant everywhere.
  std::optional<double> constant_value() const noexcept { return impl_->constant; }
  bool is_zero() const noexcept { return impl_->constant && *impl_->constant == 0.0; }

 private:
  struct Impl {
    Rect domain;
    Evaluator eval;
    Provenance provenance;
    Dependence dependence;
    int max_order;
    std::optional<double> constant;
  };
  std::shared_ptr<const Impl> impl_;
};

/// Pointwise combination of fields (value only; derivatives are not available).
SmoothField combine(std::vector<SmoothField> inputs,
                    std::function<double(std::span<const double>)> op, std::string source);

SmoothField operator+(const SmoothField& a, const SmoothField& b);
SmoothField operator*(const SmoothField& a, const SmoothField& b);
SmoothField operator*(double s, const SmoothField& a);

/// Write a field sampled on a grid as CSV `x,t,value`.
void write_csv(std::ostream& os, const SmoothField& f, const Grid2D& grid);

}  // namespace colhyp
