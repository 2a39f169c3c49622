#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "colhyp/characteristics.hpp"
#include "colhyp/grid.hpp"
#include "colhyp/smooth_field.hpp"

namespace colhyp {

/// (d_t + Lambda d_x) u = f u + g, u(x, 0) = u0, Lambda = diag(lambda_1..lambda_n).
struct HyperbolicProblem {
  std::vector<SmoothField> lambda;
  std::vector<std::vector<SmoothField>> f;
  std::vector<SmoothField> g;
  std::vector<SmoothField> u0;
  DeterminacyDomain domain;

  std::size_t size() const noexcept { return lambda.size(); }
  /// Shapes consistent, n >= 1, domain non-empty.
  void validate() const;

  /// Scalar problem u_t + lambda u_x = f u + g.
  static HyperbolicProblem scalar(SmoothField lambda, SmoothField f, SmoothField g, SmoothField u0,
                                  DeterminacyDomain domain);
};

/// Per-component values on a space-time grid; nodes outside K_T hold NaN.
class SolutionField {
 public:
  SolutionField(Grid2D grid, std::size_t components, DeterminacyDomain domain);

  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t components() const noexcept { return n_; }
  const DeterminacyDomain& domain() const noexcept { return domain_; }

  bool valid(std::size_t ix, std::size_t it) const noexcept;
  /// Valid node range [first, last] of time level `it` (first > last when empty).
  std::pair<std::size_t, std::size_t> valid_range(std::size_t it) const noexcept { return ranges_[it]; }
  void set_valid_range(std::size_t it, std::size_t first, std::size_t last);

  double at_node(std::size_t i, std::size_t ix, std::size_t it) const noexcept {
    return values_[(i * grid_.t.size() + it) * grid_.x.size() + ix];
  }
  double& at_node(std::size_t i, std::size_t ix, std::size_t it) noexcept {
    return values_[(i * grid_.t.size() + it) * grid_.x.size() + ix];
  }
  /// Cubic Lagrange interpolation in x within level `it`, stencil kept on valid nodes.
  double interpolate_level(std::size_t i, std::size_t it, double x) const;
  /// Cubic interpolation in x and t; DomainError outside K_T.
  double operator()(std::size_t i, double x, double t) const;

  int iterations = 0;
  double final_difference = 0.0;
  double audit_residual = 0.0;

  /// CSV `x,t,u1..un` over the valid nodes.
  void write_csv(std::ostream& os) const;

 private:
  Grid2D grid_;
  std::size_t n_;
  DeterminacyDomain domain_;
  std::vector<double> values_;
  std::vector<std::pair<std::size_t, std::size_t>> ranges_;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 64;
  /// RK4 substeps per grid time step for the characteristic feet.
  int substeps = 1;
  std::size_t audit_points = 100;
  std::uint64_t audit_seed = 0x5eed;
};

/// Global Picard iteration of the integral equations along characteristics.
///
/// Each sweep marches the time levels: u_i at (x_j, t_m) is the value at the foot of the
/// i-th characteristic on level m-1 plus the trapezoid integral of (f u_prev + g)_i over
/// the step. The grid's x range must cover [-kappa, kappa] and its t range [0, T]
/// (or [-T, 0], handled by mirroring). Throws IterationLimitError if the sup-difference
/// of successive sweeps stays above tol after max_iter sweeps, and Error when the audit
/// residual exceeds 10 tol.
SolutionField solve_system(const HyperbolicProblem& problem, const Grid2D& grid,
                           const SolverOptions& options = {});

/// Both sides of the a-priori estimate
/// sup |u| <= (sup_{K_0} |u0| + T sup |g|) exp(T sup |f|), |f| = max_i sum_j |f_ij|.
struct GronwallReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double sup_u0 = 0.0;
  double sup_g = 0.0;
  double sup_f = 0.0;
  bool holds = false;
};

GronwallReport gronwall_check(const HyperbolicProblem& problem, const SolutionField& solution,
                              double tol = 1e-8);

/// Coefficients of u_tt - lambda^2 u_xx = f u + h u_t + k u_x + g; unset fields are zero.
struct WaveEquation {
  SmoothField lambda = SmoothField::constant(1.0);
  SmoothField f = SmoothField::constant(0.0);
  SmoothField h = SmoothField::constant(0.0);
  SmoothField k = SmoothField::constant(0.0);
  SmoothField g = SmoothField::constant(0.0);
  /// Initial data; u0 must provide its first x-derivative.
  SmoothField u0 = SmoothField::constant(0.0);
  SmoothField u1 = SmoothField::constant(0.0);
};

/// Equivalent first-order system in (v, w, u), v = (d_t - lambda d_x) u, w = (d_t + lambda d_x) u.
///
/// Division by lambda is needed only when k or d_t lambda may be non-zero; then
/// inf |lambda| over the domain below `lambda_floor` throws InvertibilityError.
HyperbolicProblem wave_to_system(const WaveEquation& eq, const DeterminacyDomain& domain,
                                 double lambda_floor = 1e-6);

/// Decoupled system of the wave equation on the graph of c:
/// speeds (lambda, -lambda, 0) with lambda = (1 + c'^2)^{-1/2}, data u1 -/+ lambda u0'.
HyperbolicProblem geometric_wave_system(const SmoothField& c_prime, const SmoothField& u0,
                                        const SmoothField& u1, const DeterminacyDomain& domain);

/// u(x, t) = u0(x - int_0^t lambda(s) ds) for a speed depending on t only.
///
/// The shift integral uses composite Simpson with sub-intervals no longer than
/// `quadrature_step`. Every grid node is evaluated; DomainError if a shifted argument
/// leaves u0's domain.
SolutionField transport_t_only(const SmoothField& lambda, const SmoothField& u0, const Grid2D& grid,
                               double quadrature_step);

/// Cumulative int_0^t lambda(s) ds at the given times (composite Simpson).
std::vector<double> integrate_speed(const SmoothField& lambda, const std::vector<double>& times,
                                    double quadrature_step);

/// Closed-form solution of the geometric wave equation through arclength characteristics:
/// u = (u0(g+) + u0(g-) + int_0^t (u1(g+(x, s)) + u1(g-(x, s))) ds) / 2.
/// Nodes whose characteristics leave the arclength table throw DomainError.
SolutionField geometric_wave_solve(const ArclengthMap& L, const SmoothField& u0,
                                   const SmoothField& u1, const Grid2D& grid);

}  // namespace colhyp
