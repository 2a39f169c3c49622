#pragma once

// Sampled stochastic processes used as coefficients, forcing and data.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "colhyp/grid.hpp"

namespace colhyp {

/// One path X(., omega) of a 1-parameter process, tabulated on a grid.
///
/// Between nodes the path is the linear interpolant. `tag` records the process
/// specification so that (tag, grid, seed) regenerates the values bit-exactly.
struct SampledProcess {
  Grid1D grid;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string tag;

  /// Linear interpolation; clamps outside the grid.
  double at(double x) const noexcept;
};

/// Path of a 2-parameter process on a tensor grid, values indexed like Grid2D::index.
struct SampledSheet {
  Grid2D grid;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string tag;

  double at_node(std::size_t ix, std::size_t it) const { return values[grid.index(ix, it)]; }
};

enum class KernelKind { exponential, squared_exponential, brownian, tabulated };

/// Covariance C(x, y) of a zero-mean Gaussian field.
///
/// exponential:         variance * exp(-|x-y| / length)
/// squared_exponential: variance * exp(-|x-y|^2 / length^2)
/// brownian:            variance * min(|x|,|y|) for same-sign x, y, else 0
/// tabulated:           variance * r(|x-y|), r linear between (lag, value) pairs, 0 past the last lag
struct CovarianceKernel {
  KernelKind kind = KernelKind::exponential;
  double variance = 1.0;
  double length = 1.0;
  std::vector<double> lags;
  std::vector<double> correlations;

  static CovarianceKernel exponential(double variance, double length);
  static CovarianceKernel squared_exponential(double variance, double length);
  static CovarianceKernel brownian(double variance = 1.0);
  static CovarianceKernel tabulated(double variance, std::vector<double> lags,
                                    std::vector<double> correlations);

  void validate() const;
  double operator()(double x, double y) const;
  std::string describe() const;
};

/// Gaussian white noise as independent cell increments.
///
/// A 2-D field has (nx-1)*(nt-1) cells ordered with x fastest; a 1-D field has nx-1 cells.
/// Each increment is N(0, |cell|).
struct WhiteNoiseField {
  Grid1D x;
  std::optional<Grid1D> t;
  std::vector<double> increments;
  std::uint64_t seed = 0;

  std::size_t cell_count() const noexcept;
  double cell_measure() const noexcept;
  std::size_t cells_x() const noexcept { return x.size() - 1; }
  std::size_t cells_t() const noexcept { return t ? t->size() - 1 : 1; }
  /// Cell centre (x, t); t is 0 for a 1-D field.
  std::pair<double, double> cell_center(std::size_t cell) const noexcept;
};

/// Standard Brownian motion pinned to zero at the node nearest the origin.
SampledProcess sample_brownian_1d(const Grid1D& grid, std::uint64_t seed);

/// Dense-Cholesky sampler for a Gaussian vector on a fixed grid; factorize once, draw often.
class GaussianFieldSampler {
 public:
  /// Grids beyond this size are rejected (O(n^3) factorization).
  static constexpr std::size_t max_points = 4096;

  GaussianFieldSampler(const Grid1D& grid, const CovarianceKernel& kernel);
  SampledProcess sample(std::uint64_t seed) const;
  const Grid1D& grid() const noexcept { return grid_; }

 private:
  Grid1D grid_;
  CovarianceKernel kernel_;
  Eigen::MatrixXd lower_;
};

SampledProcess sample_stationary_gaussian(const Grid1D& grid, const CovarianceKernel& kernel,
                                          std::uint64_t seed);

/// Stationary Ornstein-Uhlenbeck path dX = -theta X dt + sigma dW via its exact AR(1) transition.
SampledProcess ou_process(const Grid1D& grid, double theta, double sigma, std::uint64_t seed);

WhiteNoiseField sample_white_noise(const Grid1D& x, std::uint64_t seed);
WhiteNoiseField sample_white_noise(const Grid2D& grid, std::uint64_t seed);

/// Tabulate a test function at the cell centres of `w` (the layout white_noise_action expects).
std::vector<double> tabulate_on_cells(const WhiteNoiseField& w,
                                      const std::function<double(double, double)>& phi);

/// <W', phi> ~ sum over cells of phi(cell centre) * dW(cell).
double white_noise_action(const WhiteNoiseField& w, std::span<const double> phi);

/// Brownian sheet W(x,t) = signed white-noise mass of the rectangle between the origin and (x,t).
SampledSheet brownian_sheet(const WhiteNoiseField& w);

/// Standard normal CDF.
double normal_cdf(double x) noexcept;
/// Standard normal quantile.
double normal_quantile(double p);

/// Translation process F^{-1}(Phi(X)) applied pointwise to a path with N(0,1) marginals.
SampledProcess translation_transform(const SampledProcess& p,
                                     const std::function<double(double)>& inverse_cdf,
                                     const std::string& target_tag = "translated");

/// Quantile function of the uniform law on [lo, hi].
std::function<double(double)> uniform_quantile(double lo, double hi);

/// Sample a deterministic closed-form function on a grid (for data and smooth curves).
SampledProcess sample_function(const Grid1D& grid, const std::function<double(double)>& f,
                               const std::string& tag);

/// Resample a path onto a finer grid with a C^2 cubic B-spline through its nodes.
SampledProcess refine_cubic(const SampledProcess& p, const Grid1D& fine);

/// Write a path as CSV with columns `coordinate,value`.
void write_csv(std::ostream& os, const SampledProcess& p);

}  // namespace colhyp
