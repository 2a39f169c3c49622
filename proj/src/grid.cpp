#include "colhyp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "colhyp/errors.hpp"

namespace colhyp {

Grid1D::Grid1D(double lower, double step, std::size_t count)
    : lower_(lower), step_(step), count_(count) {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(lower)) {
    std::ostringstream msg;
    msg << "grid step must be positive and finite (got " << step << ")";
    throw InvalidGridError(msg.str());
  }
  if (count < 1) throw InvalidGridError("grid needs at least one point");
}

Grid1D Grid1D::from_bounds(double lower, double upper, std::size_t count) {
  if (count < 2) throw InvalidGridError("grid over an interval needs at least two points");
  if (!(upper > lower)) throw InvalidGridError("grid upper bound must exceed lower bound");
  Grid1D g(lower, (upper - lower) / static_cast<double>(count - 1), count);
  const double scale = std::max({std::abs(lower), std::abs(upper), 1.0});
  if (std::abs(g.upper() - upper) > 1e-12 * scale) throw InvalidGridError("grid endpoint mismatch");
  return g;
}

Grid1D Grid1D::with_max_step(double lower, double upper, double max_step) {
  if (!(max_step > 0.0)) throw InvalidGridError("grid step must be positive");
  if (!(upper > lower)) throw InvalidGridError("grid upper bound must exceed lower bound");
  const auto cells = static_cast<std::size_t>(std::ceil((upper - lower) / max_step - 1e-9));
  return from_bounds(lower, upper, std::max<std::size_t>(cells, 1) + 1);
}

Grid1D Grid1D::single(double x) { return Grid1D(x, 1.0, 1); }

std::vector<double> Grid1D::points() const {
  std::vector<double> out(count_);
  for (std::size_t i = 0; i < count_; ++i) out[i] = (*this)[i];
  return out;
}

std::size_t Grid1D::nearest(double x) const noexcept {
  const double r = std::round((x - lower_) / step_);
  if (r <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(r), count_ - 1);
}

bool Grid1D::contains(double x, double slack) const noexcept {
  const double scale = std::max(1.0, std::abs(x));
  return x >= lower_ - slack * scale && x <= upper() + slack * scale;
}

}  // namespace colhyp
