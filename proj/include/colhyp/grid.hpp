#pragma once

#include <cstddef>
#include <vector>

namespace colhyp {

/// Uniform 1-D grid: points lower + i*step, i = 0..count-1.
class Grid1D {
 public:
  /// Grid with `count` points spanning [lower, upper].
  static Grid1D from_bounds(double lower, double upper, std::size_t count);
  /// Grid over [lower, upper] whose step is the largest value <= max_step that tiles it.
  static Grid1D with_max_step(double lower, double upper, double max_step);
  /// Degenerate single-point grid (used for one-point covariance draws).
  static Grid1D single(double x);

  Grid1D(double lower, double step, std::size_t count);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return lower_ + static_cast<double>(count_ - 1) * step_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return count_; }
  double operator[](std::size_t i) const noexcept { return lower_ + static_cast<double>(i) * step_; }
  std::vector<double> points() const;

  /// Index of the node closest to x (clamped to the grid).
  std::size_t nearest(double x) const noexcept;
  bool contains(double x, double slack = 1e-12) const noexcept;

  bool operator==(const Grid1D&) const = default;

 private:
  double lower_;
  double step_;
  std::size_t count_;
};

/// Tensor grid in (x, t).
struct Grid2D {
  Grid1D x;
  Grid1D t;

  std::size_t size() const noexcept { return x.size() * t.size(); }
  /// Row-major with x fastest: index = it * nx + ix.
  std::size_t index(std::size_t ix, std::size_t it) const noexcept { return it * x.size() + ix; }
  bool operator==(const Grid2D&) const = default;
};

}  // namespace colhyp
