#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "colhyp/grid.hpp"
#include "colhyp/smooth_field.hpp"

namespace colhyp {

/// Trapezoid K_T = {(x, t) : |t| <= T, |x| <= kappa - c |t|}.
struct DeterminacyDomain {
  double kappa = 1.0;
  double c = 0.0;
  double T = 1.0;

  /// Throws EmptyDomainError unless kappa > c T, ParameterError on T <= 0 or c < 0.
  void validate() const;
  double half_width(double t) const noexcept;
  bool contains(double x, double t, double slack = 1e-12) const noexcept;
};

/// Trajectory t -> gamma_i(x0, t0, t) of one characteristic, tabulated on a uniform time grid.
struct CharacteristicCurve {
  int component = 0;
  double x0 = 0.0;
  double t0 = 0.0;
  std::vector<double> times;
  std::vector<double> positions;
  double step = 0.0;
  /// Endpoint error estimate (Richardson against half the number of steps for RK4,
  /// last sup-difference for the Picard oracle).
  double error_estimate = 0.0;

  double end_position() const { return positions.back(); }
  /// Linear interpolation between tabulated times.
  double at(double t) const;
  void write_csv(std::ostream& os) const;
};

/// One classical RK4 step of dx/dt = lambda(x, t). Throws DomainEscapeError when a stage
/// leaves the field's domain.
double rk4_step(const SmoothField& lambda, double x, double t, double dt);

/// RK4 solution of dgamma/dt = lambda(gamma, t), gamma(t0) = x0, integrated to t_end
/// (either direction) with the largest uniform step <= `step`.
CharacteristicCurve integrate_characteristic(const SmoothField& lambda, double x0, double t0,
                                             double t_end, double step, int component = 0);

struct PicardOracleResult {
  CharacteristicCurve curve;
  /// Sup-difference between successive iterates.
  std::vector<double> differences;
  /// Empty when the differences decreased monotonically (up to round-off).
  std::string warning;
  int iterations = 0;
};

/// Fixed-point iteration h <- x0 + int_{t0}^t lambda(h(s), s) ds with cumulative trapezoid
/// quadrature; an independent oracle for integrate_characteristic.
PicardOracleResult picard_characteristic_oracle(const SmoothField& lambda, double x0, double t0,
                                                double t_end, int iterations, double step);

/// Options for the sampled speed bound.
struct DeterminacySampling {
  std::size_t nx = 201;
  std::size_t nt = 101;
  double inflation = 0.01;
};

/// K_T for the given speeds: c = sampled sup |lambda_i| over [-kappa, kappa] x [-T, T]
/// (points outside a field's domain are skipped) inflated by 1%.
DeterminacyDomain determinacy_domain(std::span<const SmoothField> lambdas, double kappa, double T,
                                     const DeterminacySampling& sampling = {});

/// L(z) = int_0^z sqrt(1 + c'(y)^2) dy tabulated on a grid containing 0.
///
/// The integrand is linear between nodes, so L is exact piecewise quadratic there.
class ArclengthMap {
 public:
  ArclengthMap(const SmoothField& c_prime, const Grid1D& grid);
  /// Map for an explicitly tabulated integrand sqrt(1 + c'^2) (values >= 1).
  ArclengthMap(const Grid1D& grid, std::vector<double> speed);

  double operator()(double z) const;
  /// L^{-1}(s) by bisection; DomainError when s is outside [L(lower), L(upper)].
  double inverse(double s) const;
  const Grid1D& grid() const noexcept { return grid_; }
  double min_value() const noexcept { return cumulative_.front() - origin_; }
  double max_value() const noexcept { return cumulative_.back() - origin_; }

 private:
  double raw(double z) const;

  Grid1D grid_;
  std::vector<double> speed_;
  std::vector<double> cumulative_;
  double origin_ = 0.0;
};

/// (gamma+, gamma-) = (L^{-1}(L(x) - t), L^{-1}(L(x) + t)).
std::pair<double, double> arclength_characteristics(const ArclengthMap& L, double x, double t);

/// Convenience overload: tabulates c' on `grid` first.
std::pair<double, double> arclength_characteristics(const SmoothField& c_prime,
                                                    const Grid1D& grid, double x, double t);

}  // namespace colhyp
