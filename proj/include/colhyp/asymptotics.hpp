#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "colhyp/hypsolve.hpp"
#include "colhyp/smooth_field.hpp"

namespace colhyp {

/// p value standing for the empirical maximum over samples (a lower bound of the L^inf norm).
inline constexpr int p_infinity = -1;

/// What a series measures: sup over K of |d^alpha u_eps| in L^p(Omega).
struct NormDescriptor {
  std::string quantity = "sup";
  Rect K = Rect::x_interval(0.0, 1.0);
  int alpha = 0;
  /// 0 pathwise, p >= 1 Monte Carlo L^p, p_infinity empirical maximum.
  int p = 0;
  std::size_t samples = 1;
  /// The quantity is an L^1-in-time norm (int_0^T sup_x |.| dt), enabling the L1-type verdict.
  bool time_l1 = false;
};

/// Measurements m(eps) >= 0 along a ladder (eps strictly decreasing, not necessarily geometric).
struct EpsSeries {
  std::vector<double> eps;
  std::vector<double> values;
  NormDescriptor descriptor;

  void validate() const;
  void write_csv(std::ostream& os) const;
};

enum class Verdict { moderate, negligible, log_type, bounded, l1_type, inconclusive };
std::string to_string(Verdict v);

/// Least-squares fit of y = intercept + slope * x; residual is the root-mean-square deviation.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

struct Classification {
  Verdict verdict = Verdict::inconclusive;
  /// moderate: a in m ~ eps^-a; negligible: certified order b_max; otherwise 0.
  double exponent = 0.0;
  /// bounded / log-type / L1-type constant c; moderate prefactor.
  double constant = 0.0;
  /// Residual of the winning fit (log space).
  double residual = 0.0;
  std::string note;

  LineFit power;        // log m against log(1/eps)
  LineFit logarithmic;  // log m - log|log eps| against nothing (slope 0)
  LineFit flat;         // log m against nothing (slope 0)
  LineFit exponential;  // log m against 1/eps

  std::string describe() const;
};

struct ClassifyOptions {
  /// Largest negligibility order certified (the "for all b" quantifier is cut here).
  int b_max = 8;
  /// Residual below which a fit counts as a good description.
  double good_residual = 0.1;
  /// Residual differences below this are ties, resolved bounded > log-type > moderate.
  double tie = 0.02;
};

/// Fit the series against power, logarithmic, constant and exponential laws and choose a type.
/// Needs at least five points (ParameterError); non-positive values give inconclusive.
Classification classify(const EpsSeries& series, const ClassifyOptions& options = {});

/// Field of one (eps, sample) pair.
using FieldFactory = std::function<SmoothField(double eps, std::size_t sample)>;

struct SupSampling {
  /// Sample spacing as a multiple of eps.
  double resolution = 0.125;
  std::size_t max_points_per_axis = 4001;
};

/// Both orders of taking the sup over K and the L^p(Omega) norm.
struct MeasuredSeries {
  /// || sup_K |d^alpha u| ||_p (for p = 0: the sup of sample 0).
  EpsSeries norm_of_sup;
  /// sup_K || d^alpha u(x) ||_p on the same sample set.
  EpsSeries sup_of_norm;
  /// pathwise[level][sample] = sup_K |d^alpha u_eps(., omega_sample)|.
  std::vector<std::vector<double>> pathwise;
  /// sup_of_norm <= norm_of_sup at every level.
  bool interchange_holds = true;
  std::size_t interchange_checks = 0;
};

MeasuredSeries measure_series(const FieldFactory& factory, const NormDescriptor& descriptor,
                              const std::vector<double>& eps, const SupSampling& sampling = {},
                              std::size_t jobs = 1);

/// Test function psi supported in [lo, hi].
struct TestFunction {
  std::function<double(double)> psi;
  double lo = 0.0;
  double hi = 1.0;
  std::string name;
};

struct AssociationReport {
  std::vector<double> eps;
  /// gaps[level][test] = |E int (u_eps - v) psi dx|
  std::vector<std::vector<double>> gaps;
  /// Standard errors of the gaps over samples (0 for deterministic families).
  std::vector<std::vector<double>> standard_errors;
  /// Every test's gap is non-increasing along the ladder (allowing 2 SE of noise).
  bool decreasing = false;
  /// Every final-level gap is below `tolerance` + 3 SE.
  bool below_tolerance = false;
};

/// Pairing gaps int (u_eps - v) psi along the ladder; `reference(psi)` gives <v, psi>.
/// Throws DomainError when a test function's support leaves the field's domain.
AssociationReport association_check(const FieldFactory& factory,
                                    const std::function<double(const TestFunction&)>& reference,
                                    const std::vector<TestFunction>& tests,
                                    const std::vector<double>& eps, std::size_t n_samples,
                                    double tolerance, std::size_t jobs = 1);

/// <v, psi> for a function v by adaptive quadrature over the support of psi.
std::function<double(const TestFunction&)> function_reference(std::function<double(double)> v);

/// int_lo^hi u(x) psi(x) dx by composite Gauss-Legendre with panels no wider than `panel`.
double pair_with(const std::function<double(double)>& u, const TestFunction& psi, double panel);

/// Values of one sample at a fixed list of points.
using SampleFactory = std::function<std::vector<double>(std::size_t sample)>;

struct MomentEstimate {
  int p = 1;
  std::size_t samples = 0;
  std::vector<double> mean;
  std::vector<double> standard_error;
};

/// Pointwise Monte Carlo mean of u^p with standard errors (Welford updates in sample order).
MomentEstimate sample_moments(const SampleFactory& factory, int p, std::size_t n_samples,
                              std::size_t jobs = 1);

/// E(u_i^p) on the solution grid; invalid nodes give NaN.
struct MomentField {
  Grid2D grid;
  MomentEstimate estimate;
  double mean_at(std::size_t ix, std::size_t it) const { return estimate.mean[grid.index(ix, it)]; }
  double se_at(std::size_t ix, std::size_t it) const {
    return estimate.standard_error[grid.index(ix, it)];
  }
};

using SolutionFactory = std::function<SolutionField(std::size_t sample)>;

/// Needs p >= 1 and n_samples >= 100.
MomentField moment_field(const SolutionFactory& factory, std::size_t component, int p,
                         const Grid2D& grid, std::size_t n_samples, std::size_t jobs = 1);

struct CovarianceEstimate {
  std::size_t dim = 0;
  std::size_t samples = 0;
  std::vector<double> mean;
  /// Row-major dim x dim, symmetric by construction.
  std::vector<double> covariance;
  std::vector<double> standard_error;
  double cov(std::size_t i, std::size_t j) const { return covariance[i * dim + j]; }
  double se(std::size_t i, std::size_t j) const { return standard_error[i * dim + j]; }
};

/// Centered two-pass covariance estimate of the sample vectors; n_samples >= 100.
CovarianceEstimate autocovariance(const SampleFactory& factory, std::size_t n_samples,
                                  std::size_t jobs = 1);

/// Covariance of u_i at the given (x, t) points.
CovarianceEstimate autocovariance(const SolutionFactory& factory, std::size_t component,
                                  const std::vector<std::pair<double, double>>& points,
                                  std::size_t n_samples, std::size_t jobs = 1);

/// Exponential-tail family on Omega = [0, inf) with the standard exponential law:
/// u_eps(omega) = exp(1/eps) if omega >= p'/eps, else 0, so E(u_eps^p) = exp((p - p')/eps).
struct ExponentialTailFamily {
  double p_prime = 2.0;
  double threshold(double eps) const { return p_prime / eps; }
  double value(double eps, double omega) const;
  double moment(double eps, double p) const;
};

/// Sliding-spike family on Omega = [-1, 1] with the uniform law:
/// v_eps = exp(1/eps) 1_(-exp(-1/eps), exp(-1/eps)), u_eps(omega) = v_eps(omega - sin(1/eps)).
///
/// Evaluation uses long double so the spike stays resolved along the planted subsequence.
struct SlidingSpikeFamily {
  long double value(long double eps, long double omega) const;
  /// E|u_eps| in closed form (<= 1).
  double mean_abs(double eps) const;
  /// eps_k = 1/(asin(omega) + 2 pi k), k = 1..count, on which u_eps_k(omega) = exp(1/eps_k).
  std::vector<long double> planted_subsequence(long double omega, int count) const;
};

}  // namespace colhyp
