#include "colhyp/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "colhyp/detail/csv.hpp"
#include "colhyp/errors.hpp"
#include "colhyp/seeding.hpp"

namespace colhyp {

double SampledProcess::at(double x) const noexcept {
  const std::size_t n = values.size();
  if (n == 1) return values[0];
  const double s = (x - grid.lower()) / grid.step();
  if (s <= 0.0) return values.front();
  const auto i = static_cast<std::size_t>(s);
  if (i >= n - 1) return values.back();
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

// --- covariance kernels ---------------------------------------------------

CovarianceKernel CovarianceKernel::exponential(double variance, double length) {
  CovarianceKernel k{KernelKind::exponential, variance, length, {}, {}};
  k.validate();
  return k;
}

CovarianceKernel CovarianceKernel::squared_exponential(double variance, double length) {
  CovarianceKernel k{KernelKind::squared_exponential, variance, length, {}, {}};
  k.validate();
  return k;
}

CovarianceKernel CovarianceKernel::brownian(double variance) {
  CovarianceKernel k{KernelKind::brownian, variance, 1.0, {}, {}};
  k.validate();
  return k;
}

CovarianceKernel CovarianceKernel::tabulated(double variance, std::vector<double> lags,
                                             std::vector<double> correlations) {
  CovarianceKernel k{KernelKind::tabulated, variance, 1.0, std::move(lags), std::move(correlations)};
  k.validate();
  return k;
}

void CovarianceKernel::validate() const {
  if (!(variance > 0.0)) throw ParameterError("covariance kernel variance must be positive");
  if (!(length > 0.0)) throw ParameterError("covariance kernel correlation length must be positive");
  if (kind == KernelKind::tabulated) {
    if (lags.size() != correlations.size() || lags.size() < 2)
      throw ParameterError("tabulated kernel needs matching lag/correlation arrays (>= 2 entries)");
    if (lags.front() != 0.0) throw ParameterError("tabulated kernel must start at lag 0");
    for (std::size_t i = 1; i < lags.size(); ++i)
      if (!(lags[i] > lags[i - 1])) throw ParameterError("tabulated kernel lags must increase");
  }
}

double CovarianceKernel::operator()(double x, double y) const {
  const double h = std::abs(x - y);
  switch (kind) {
    case KernelKind::exponential:
      return variance * std::exp(-h / length);
    case KernelKind::squared_exponential:
      return variance * std::exp(-(h * h) / (length * length));
    case KernelKind::brownian:
      if ((x >= 0.0) != (y >= 0.0)) return 0.0;
      return variance * std::min(std::abs(x), std::abs(y));
    case KernelKind::tabulated: {
      if (h >= lags.back()) return 0.0;
      const auto it = std::upper_bound(lags.begin(), lags.end(), h);
      const auto i = static_cast<std::size_t>(it - lags.begin()) - 1;
      const double w = (h - lags[i]) / (lags[i + 1] - lags[i]);
      return variance * ((1.0 - w) * correlations[i] + w * correlations[i + 1]);
    }
  }
  return 0.0;
}

std::string CovarianceKernel::describe() const {
  std::ostringstream os;
  switch (kind) {
    case KernelKind::exponential: os << "exponential"; break;
    case KernelKind::squared_exponential: os << "squared_exponential"; break;
    case KernelKind::brownian: os << "brownian"; break;
    case KernelKind::tabulated: os << "tabulated[" << lags.size() << "]"; break;
  }
  os << "(var=" << variance << ",len=" << length << ")";
  return os.str();
}

// --- processes --------------------------------------------------------------

SampledProcess sample_brownian_1d(const Grid1D& grid, std::uint64_t seed) {
  SampledProcess out{grid, std::vector<double>(grid.size(), 0.0), seed, "brownian"};
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(grid.step());
  const std::size_t origin = grid.nearest(0.0);
  for (std::size_t i = origin + 1; i < grid.size(); ++i)
    out.values[i] = out.values[i - 1] + sd * normal(rng);
  for (std::size_t i = origin; i-- > 0;) out.values[i] = out.values[i + 1] + sd * normal(rng);
  return out;
}

GaussianFieldSampler::GaussianFieldSampler(const Grid1D& grid, const CovarianceKernel& kernel)
    : grid_(grid), kernel_(kernel) {
  kernel.validate();
  const std::size_t n = grid.size();
  if (n > max_points) throw ParameterError("Gaussian field grid exceeds the dense Cholesky limit");
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = kernel(grid[i], grid[j]);
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
      cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
    }
  cov.diagonal().array() += 1e-10 * kernel.variance;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw KernelNotPsdError("covariance matrix is not positive semidefinite: " + kernel.describe());
  lower_ = llt.matrixL();
}

SampledProcess GaussianFieldSampler::sample(std::uint64_t seed) const {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
  const Eigen::VectorXd x = lower_.triangularView<Eigen::Lower>() * z;
  return SampledProcess{grid_, std::vector<double>(x.data(), x.data() + n), seed,
                        "gaussian:" + kernel_.describe()};
}

SampledProcess sample_stationary_gaussian(const Grid1D& grid, const CovarianceKernel& kernel,
                                          std::uint64_t seed) {
  return GaussianFieldSampler(grid, kernel).sample(seed);
}

SampledProcess ou_process(const Grid1D& grid, double theta, double sigma, std::uint64_t seed) {
  if (!(theta > 0.0)) throw ParameterError("OU rate theta must be positive");
  if (!(sigma > 0.0)) throw ParameterError("OU noise scale sigma must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double stationary_sd = sigma / std::sqrt(2.0 * theta);
  const double a = std::exp(-theta * grid.step());
  const double innovation_sd = stationary_sd * std::sqrt(-std::expm1(-2.0 * theta * grid.step()));
  SampledProcess out{grid, std::vector<double>(grid.size()), seed, "ou"};
  out.values[0] = stationary_sd * normal(rng);
  for (std::size_t i = 1; i < grid.size(); ++i)
    out.values[i] = a * out.values[i - 1] + innovation_sd * normal(rng);
  return out;
}

// --- white noise --------------------------------------------------------------

std::size_t WhiteNoiseField::cell_count() const noexcept { return cells_x() * cells_t(); }

double WhiteNoiseField::cell_measure() const noexcept {
  return x.step() * (t ? t->step() : 1.0);
}

std::pair<double, double> WhiteNoiseField::cell_center(std::size_t cell) const noexcept {
  const std::size_t cx = cell % cells_x();
  const std::size_t ct = cell / cells_x();
  const double xc = x[cx] + 0.5 * x.step();
  const double tc = t ? (*t)[ct] + 0.5 * t->step() : 0.0;
  return {xc, tc};
}

namespace {

WhiteNoiseField fill_white_noise(WhiteNoiseField w) {
  if (w.x.size() < 2 || (w.t && w.t->size() < 2))
    throw InvalidGridError("white noise needs at least one cell per axis");
  Rng rng(w.seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(w.cell_measure()));
  w.increments.resize(w.cell_count());
  for (double& v : w.increments) v = normal(rng);
  return w;
}

}  // namespace

WhiteNoiseField sample_white_noise(const Grid1D& x, std::uint64_t seed) {
  return fill_white_noise(WhiteNoiseField{x, std::nullopt, {}, seed});
}

WhiteNoiseField sample_white_noise(const Grid2D& grid, std::uint64_t seed) {
  return fill_white_noise(WhiteNoiseField{grid.x, grid.t, {}, seed});
}

std::vector<double> tabulate_on_cells(const WhiteNoiseField& w,
                                      const std::function<double(double, double)>& phi) {
  std::vector<double> out(w.cell_count());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto [xc, tc] = w.cell_center(c);
    out[c] = phi(xc, tc);
  }
  return out;
}

double white_noise_action(const WhiteNoiseField& w, std::span<const double> phi) {
  if (phi.size() != w.increments.size()) {
    std::ostringstream msg;
    msg << "test function has " << phi.size() << " cell values, white noise has "
        << w.increments.size();
    throw ShapeError(msg.str());
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < phi.size(); ++c) acc += phi[c] * w.increments[c];
  return acc;
}

SampledSheet brownian_sheet(const WhiteNoiseField& w) {
  if (!w.t) throw ShapeError("brownian_sheet needs a 2-D white noise field");
  const Grid1D& gx = w.x;
  const Grid1D& gt = *w.t;
  const std::size_t nx = gx.size(), nt = gt.size();
  const std::size_t ox = gx.nearest(0.0), ot = gt.nearest(0.0);
  SampledSheet out{Grid2D{gx, gt}, std::vector<double>(nx * nt, 0.0), w.seed, "brownian_sheet"};
  // Signed cumulative sums outward from the origin node in each quadrant.
  auto cell = [&](std::size_t cx, std::size_t ct) { return w.increments[ct * (nx - 1) + cx]; };
  auto outward = [](std::size_t n, std::size_t origin) {
    std::vector<std::size_t> order;
    for (std::size_t i = origin; i < n; ++i) order.push_back(i);
    for (std::size_t i = origin; i-- > 0;) order.push_back(i);
    return order;
  };
  const auto xorder = outward(nx, ox);
  const auto torder = outward(nt, ot);
  for (std::size_t it : torder) {
    for (std::size_t ix : xorder) {
      if (ix == ox || it == ot) continue;
      const bool right = ix > ox, up = it > ot;
      const std::size_t cx = right ? ix - 1 : ix;
      const std::size_t ct = up ? it - 1 : it;
      const std::size_t px = right ? ix - 1 : ix + 1;
      const std::size_t pt = up ? it - 1 : it + 1;
      const double sign = (right == up) ? 1.0 : -1.0;
      out.values[out.grid.index(ix, it)] = out.values[out.grid.index(px, it)] +
                                           out.values[out.grid.index(ix, pt)] -
                                           out.values[out.grid.index(px, pt)] + sign * cell(cx, ct);
    }
  }
  return out;
}

// --- translation processes ----------------------------------------------------

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, p);
}

SampledProcess translation_transform(const SampledProcess& p,
                                     const std::function<double(double)>& inverse_cdf,
                                     const std::string& target_tag) {
  SampledProcess out = p;
  out.tag = p.tag + "|" + target_tag;
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  for (double& v : out.values) v = inverse_cdf(std::clamp(normal_cdf(v), lo, hi));
  return out;
}

std::function<double(double)> uniform_quantile(double lo, double hi) {
  if (!(hi > lo)) throw ParameterError("uniform quantile needs lo < hi");
  return [lo, hi](double u) { return std::clamp(lo + (hi - lo) * u, lo, hi); };
}

SampledProcess sample_function(const Grid1D& grid, const std::function<double(double)>& f,
                               const std::string& tag) {
  SampledProcess out{grid, std::vector<double>(grid.size()), 0, tag};
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = f(grid[i]);
  return out;
}

SampledProcess refine_cubic(const SampledProcess& p, const Grid1D& fine) {
  if (p.values.size() < 4) throw InvalidGridError("cubic refinement needs at least four nodes");
  if (fine.lower() < p.grid.lower() - 1e-12 || fine.upper() > p.grid.upper() + 1e-12)
    throw InvalidGridError("refined grid must lie inside the source grid");
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline(
      p.values.begin(), p.values.end(), p.grid.lower(), p.grid.step());
  SampledProcess out{fine, std::vector<double>(fine.size()), p.seed, p.tag + "|cubic"};
  for (std::size_t i = 0; i < fine.size(); ++i) out.values[i] = spline(fine[i]);
  return out;
}

void write_csv(std::ostream& os, const SampledProcess& p) {
  os << "coordinate,value\n";
  for (std::size_t i = 0; i < p.values.size(); ++i)
    os << detail::format_number(p.grid[i]) << ',' << detail::format_number(p.values[i]) << '\n';
}

}  // namespace colhyp
