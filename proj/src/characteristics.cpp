#include "colhyp/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "colhyp/detail/csv.hpp"
#include "colhyp/errors.hpp"

namespace colhyp {

void DeterminacyDomain::validate() const {
  if (!(T > 0.0)) throw ParameterError("determinacy domain needs T > 0");
  if (!(c >= 0.0)) throw ParameterError("determinacy domain needs c >= 0");
  if (!(kappa > c * T)) {
    std::ostringstream msg;
    msg << "empty domain of determinacy: kappa = " << kappa << " <= c T = " << c * T;
    throw EmptyDomainError(msg.str());
  }
}

double DeterminacyDomain::half_width(double t) const noexcept { return kappa - c * std::abs(t); }

bool DeterminacyDomain::contains(double x, double t, double slack) const noexcept {
  return std::abs(t) <= T + slack && std::abs(x) <= half_width(t) + slack;
}

double CharacteristicCurve::at(double t) const {
  if (times.size() == 1) return positions.front();
  const double dt = times[1] - times[0];
  const double pos = (t - times[0]) / dt;
  const double last = static_cast<double>(times.size() - 1);
  if (pos < -1e-9 || pos > last + 1e-9) throw DomainError("time outside the tabulated trajectory");
  const double clamped = std::clamp(pos, 0.0, last);
  const auto i = std::min(static_cast<std::size_t>(clamped), times.size() - 2);
  const double w = clamped - static_cast<double>(i);
  return (1.0 - w) * positions[i] + w * positions[i + 1];
}

void CharacteristicCurve::write_csv(std::ostream& os) const {
  os << "t,gamma\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    os << detail::format_number(times[i]) << ',' << detail::format_number(positions[i]) << '\n';
}

namespace {

double speed_at(const SmoothField& lambda, double x, double t, double t_report) {
  if (!lambda.domain().contains(x, t)) {
    std::ostringstream msg;
    msg << "characteristic left the speed field's domain at (" << x << ", " << t << ")";
    throw DomainEscapeError(msg.str(), t_report);
  }
  return lambda(x, t);
}

}  // namespace

double rk4_step(const SmoothField& lambda, double x, double t, double dt) {
  if (auto c = lambda.constant_value()) return x + *c * dt;
  const double k1 = speed_at(lambda, x, t, t);
  const double k2 = speed_at(lambda, x + 0.5 * dt * k1, t + 0.5 * dt, t);
  const double k3 = speed_at(lambda, x + 0.5 * dt * k2, t + 0.5 * dt, t);
  const double k4 = speed_at(lambda, x + dt * k3, t + dt, t);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

std::size_t step_count(double span, double step) {
  if (!(step > 0.0)) throw ParameterError("integration step must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(span) / step - 1e-9)));
}

}  // namespace

CharacteristicCurve integrate_characteristic(const SmoothField& lambda, double x0, double t0,
                                             double t_end, double step, int component) {
  const std::size_t n = step_count(t_end - t0, step);
  const double dt = (t_end - t0) / static_cast<double>(n);
  CharacteristicCurve curve;
  curve.component = component;
  curve.x0 = x0;
  curve.t0 = t0;
  curve.step = std::abs(dt);
  curve.times.resize(n + 1);
  curve.positions.resize(n + 1);
  curve.times[0] = t0;
  curve.positions[0] = x0;
  double x = x0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = t0 + static_cast<double>(i - 1) * dt;
    x = rk4_step(lambda, x, t, dt);
    curve.times[i] = i == n ? t_end : t0 + static_cast<double>(i) * dt;
    curve.positions[i] = x;
  }
  if (n >= 2 && !lambda.constant_value()) {
    // Richardson: the doubled-step solution differs by about 15 times the error.
    const std::size_t half = n / 2;
    const double big = (t_end - t0) / static_cast<double>(half);
    double xc = x0;
    for (std::size_t i = 0; i < half; ++i) xc = rk4_step(lambda, xc, t0 + static_cast<double>(i) * big, big);
    curve.error_estimate = std::abs(xc - x) / 15.0;
  }
  return curve;
}

PicardOracleResult picard_characteristic_oracle(const SmoothField& lambda, double x0, double t0,
                                                double t_end, int iterations, double step) {
  if (iterations < 1) throw ParameterError("Picard oracle needs at least one iteration");
  const std::size_t n = step_count(t_end - t0, step);
  const double dt = (t_end - t0) / static_cast<double>(n);
  std::vector<double> times(n + 1);
  for (std::size_t i = 0; i <= n; ++i) times[i] = t0 + static_cast<double>(i) * dt;
  times[n] = t_end;

  PicardOracleResult result;
  std::vector<double> h(n + 1, x0);
  std::vector<double> next(n + 1);
  std::vector<double> rate(n + 1);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i <= n; ++i) rate[i] = speed_at(lambda, h[i], times[i], times[i]);
    next[0] = x0;
    for (std::size_t i = 1; i <= n; ++i) next[i] = next[i - 1] + 0.5 * dt * (rate[i - 1] + rate[i]);
    double diff = 0.0;
    for (std::size_t i = 0; i <= n; ++i) diff = std::max(diff, std::abs(next[i] - h[i]));
    h.swap(next);
    result.differences.push_back(diff);
    result.iterations = it + 1;
    if (diff == 0.0) break;
  }
  const auto& d = result.differences;
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (d[k] > d[k - 1] && d[k] > 1e-14) {
      std::ostringstream msg;
      msg << "Picard iteration not contracting: difference rose from " << d[k - 1] << " to "
          << d[k] << " at iteration " << k + 1;
      result.warning = msg.str();
      break;
    }
  }
  result.curve.x0 = x0;
  result.curve.t0 = t0;
  result.curve.step = std::abs(dt);
  result.curve.times = std::move(times);
  result.curve.positions = std::move(h);
  result.curve.error_estimate = d.back();
  return result;
}

DeterminacyDomain determinacy_domain(std::span<const SmoothField> lambdas, double kappa, double T,
                                     const DeterminacySampling& sampling) {
  if (!(kappa > 0.0) || !(T > 0.0)) throw ParameterError("kappa and T must be positive");
  if (sampling.nx < 2 || sampling.nt < 2) throw ParameterError("sampling needs two points per axis");
  double sup = 0.0;
  for (const auto& lam : lambdas) {
    if (auto c = lam.constant_value()) {
      sup = std::max(sup, std::abs(*c));
      continue;
    }
    // Fields constant along an axis need only one sample line across it.
    const bool dx = lam.dependence() == Dependence::x || lam.dependence() == Dependence::xt;
    const bool dt = lam.dependence() == Dependence::t || lam.dependence() == Dependence::xt;
    const Grid1D xs = dx ? Grid1D::from_bounds(-kappa, kappa, sampling.nx) : Grid1D::single(0.0);
    const Grid1D ts = dt ? Grid1D::from_bounds(-T, T, sampling.nt) : Grid1D::single(0.0);
    bool any = false;
    for (std::size_t it = 0; it < ts.size(); ++it)
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        if (!lam.domain().contains(xs[ix], ts[it])) continue;
        any = true;
        sup = std::max(sup, std::abs(lam(xs[ix], ts[it])));
      }
    if (!any) throw DomainError("speed field not evaluable anywhere on the strip |t| <= T");
  }
  DeterminacyDomain d{kappa, sup * (1.0 + sampling.inflation), T};
  d.validate();
  return d;
}

namespace {

std::vector<double> tabulate_speed(const SmoothField& c_prime, const Grid1D& grid) {
  std::vector<double> speed(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = c_prime(grid[i], 0.0);
    speed[i] = std::sqrt(1.0 + d * d);
  }
  return speed;
}

}  // namespace

ArclengthMap::ArclengthMap(const SmoothField& c_prime, const Grid1D& grid)
    : ArclengthMap(grid, tabulate_speed(c_prime, grid)) {}

ArclengthMap::ArclengthMap(const Grid1D& grid, std::vector<double> speed)
    : grid_(grid), speed_(std::move(speed)) {
  if (speed_.size() != grid_.size()) throw ShapeError("arclength integrand does not match grid");
  if (grid_.size() < 2) throw InvalidGridError("arclength map needs at least two nodes");
  if (grid_.lower() > 0.0 || grid_.upper() < 0.0)
    throw DomainError("arclength grid must contain the origin");
  cumulative_.assign(grid_.size(), 0.0);
  const double h = grid_.step();
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(speed_[i] >= 1.0 - 1e-12)) throw ParameterError("arclength integrand below 1");
    cumulative_[i] = cumulative_[i - 1] + 0.5 * h * (speed_[i - 1] + speed_[i]);
    if (!(cumulative_[i] > cumulative_[i - 1])) throw ParameterError("arclength not increasing");
  }
  origin_ = 0.0;
  origin_ = raw(0.0);
}

double ArclengthMap::raw(double z) const {
  const double h = grid_.step();
  const double pos = (z - grid_.lower()) / h;
  const auto i = static_cast<std::size_t>(
      std::clamp(std::floor(pos), 0.0, static_cast<double>(grid_.size() - 2)));
  const double d = z - grid_[i];
  const double slope = (speed_[i + 1] - speed_[i]) / h;
  return cumulative_[i] + d * (speed_[i] + 0.5 * slope * d);
}

double ArclengthMap::operator()(double z) const {
  if (!grid_.contains(z, 1e-12)) throw DomainError("arclength requested outside its grid");
  return raw(z) - origin_;
}

double ArclengthMap::inverse(double s) const {
  const double target = s + origin_;
  if (target < cumulative_.front() - 1e-12 || target > cumulative_.back() + 1e-12) {
    std::ostringstream msg;
    msg << "arclength " << s << " outside tabulated range [" << min_value() << ", "
        << max_value() << "]";
    throw DomainError(msg.str());
  }
  // Bracket by node, then bisect inside the segment.
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  i = std::min(i, grid_.size() - 2);
  double lo = grid_[i];
  double hi = grid_[i + 1];
  for (int k = 0; k < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (raw(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> arclength_characteristics(const ArclengthMap& L, double x, double t) {
  const double s = L(x);
  return {L.inverse(s - t), L.inverse(s + t)};
}

std::pair<double, double> arclength_characteristics(const SmoothField& c_prime,
                                                    const Grid1D& grid, double x, double t) {
  return arclength_characteristics(ArclengthMap(c_prime, grid), x, t);
}

}  // namespace colhyp
