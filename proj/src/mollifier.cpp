#include "colhyp/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "colhyp/detail/jet.hpp"
#include "colhyp/errors.hpp"

namespace colhyp {

namespace {

constexpr double inv_sqrt_2pi = 0.3989422804014327;

double gaussian(double u) { return inv_sqrt_2pi * std::exp(-0.5 * u * u); }

double horner(const std::vector<double>& c, double u) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
  return acc;
}

std::vector<double> base_polynomial(int moments) {
  switch (moments) {
    case 0: return {1.0};
    case 2: return {1.5, 0.0, -0.5};
    case 4: return {15.0 / 8.0, 0.0, -10.0 / 8.0, 0.0, 1.0 / 8.0};
    case 6: return {105.0 / 48.0, 0.0, -105.0 / 48.0, 0.0, 21.0 / 48.0, 0.0, -1.0 / 48.0};
    default: break;
  }
  std::ostringstream msg;
  msg << "unsupported number of vanishing moments " << moments << " (expected 0, 2, 4 or 6)";
  throw ParameterError(msg.str());
}

// Q' - u Q
std::vector<double> next_derivative(const std::vector<double>& q) {
  std::vector<double> out(q.size() + 1, 0.0);
  for (std::size_t i = 1; i < q.size(); ++i) out[i - 1] += static_cast<double>(i) * q[i];
  for (std::size_t i = 0; i < q.size(); ++i) out[i + 1] -= q[i];
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

Mollifier::Mollifier(int vanishing_moments, double cutoff_inner, double cutoff_outer,
                     double truncation)
    : moments_(vanishing_moments),
      cutoff_inner_(cutoff_inner),
      cutoff_outer_(cutoff_outer),
      truncation_(truncation) {
  if (!(cutoff_inner > 0.0) || !(cutoff_outer > cutoff_inner))
    throw ParameterError("cut-off radii must satisfy 0 < a < b");
  if (!(truncation > 0.0) || truncation >= 1e-3)
    throw ParameterError("mollifier truncation threshold must lie in (0, 1e-3)");
  derivative_polys_.push_back(base_polynomial(vanishing_moments));
  for (int k = 1; k <= max_derivative; ++k)
    derivative_polys_.push_back(next_derivative(derivative_polys_.back()));

  // Largest u with |rho(u)| >= truncation, scanned inward then bisected.
  double hi = 60.0;
  double lo = hi;
  while (lo > 0.0 && std::abs(rho(lo)) < truncation) lo -= 0.25;
  if (lo <= 0.0) throw ParameterError("mollifier truncation threshold leaves no support");
  hi = lo + 0.25;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    bool above = false;
    // any point beyond mid within the last scan cell still above threshold?
    for (int s = 0; s <= 16 && !above; ++s) above = std::abs(rho(mid + (hi - mid) * s / 16.0)) >= truncation;
    if (above) lo = mid;
    else hi = mid;
  }
  radius_ = hi;
}

double Mollifier::support_radius(double eps) const noexcept {
  return std::min(cutoff_outer_, radius_ * eps);
}

std::string Mollifier::formula() const {
  std::ostringstream os;
  os << "gaussian-laguerre(M=" << moments_ << ",a=" << cutoff_inner_ << ",b=" << cutoff_outer_
     << ",trunc=" << truncation_ << ")";
  return os.str();
}

double Mollifier::rho(double u, int k) const {
  if (k < 0 || k > max_derivative) throw ParameterError("mollifier derivative order out of range");
  return gaussian(u) * horner(derivative_polys_[static_cast<std::size_t>(k)], u);
}

double Mollifier::cutoff(double z, int k) const {
  const double r = std::abs(z);
  if (r <= cutoff_inner_) return k == 0 ? 1.0 : 0.0;
  if (r >= cutoff_outer_) return 0.0;
  if (k > max_derivative) throw ParameterError("cut-off derivative order out of range");
  using J = detail::Jet<max_derivative>;
  const double sign = z < 0.0 ? -1.0 : 1.0;
  const J zj = J::variable(z);
  const J rj = J::constant(sign) * zj;
  const J s = (J::constant(cutoff_outer_) - rj) / J::constant(cutoff_outer_ - cutoff_inner_);
  const J one = J::constant(1.0);
  auto f = [&](const J& v) { return exp(J::constant(-1.0) / v); };
  const J fs = f(s);
  const J chi = fs / (fs + f(one - s));
  return chi.derivative(static_cast<std::size_t>(k));
}

double Mollifier::kernel(double z, double eps, int k) const {
  const double r = std::abs(z);
  if (r >= support_radius(eps)) return 0.0;
  const double u = z / eps;
  const double phi = gaussian(u);
  auto scaled = [&](int j) {
    return phi * horner(derivative_polys_[static_cast<std::size_t>(j)], u) * std::pow(eps, -1 - j);
  };
  if (r <= cutoff_inner_) return scaled(k);
  double acc = 0.0;
  for (int m = 0; m <= k; ++m) acc += binomial(k, m) * cutoff(z, m) * scaled(k - m);
  return acc;
}

double Mollifier::kernel_cdf(double z, double eps) const {
  const double support = support_radius(eps);
  if (radius_ * eps <= cutoff_inner_) {
    const double u = std::clamp(z / eps, -radius_, radius_);
    // I_n(u) = int_{-inf}^u v^n phi(v) dv by the recursion I_n = (n-1) I_{n-2} - u^{n-1} phi(u).
    const auto& p = derivative_polys_[0];
    const double phi = gaussian(u);
    double i_prev2 = 0.5 * std::erfc(-u / std::numbers::sqrt2);
    double i_prev1 = -phi;
    double acc = p[0] * i_prev2 + (p.size() > 1 ? p[1] * i_prev1 : 0.0);
    double upow = 1.0;  // u^{n-1}
    for (std::size_t n = 2; n < p.size(); ++n) {
      upow *= u;
      const double in = static_cast<double>(n - 1) * i_prev2 - upow * phi;
      acc += p[n] * in;
      i_prev2 = i_prev1;
      i_prev1 = in;
    }
    return acc;
  }
  if (z <= -support) return 0.0;
  const double hi = std::min(z, support);
  auto f = [&](double y) { return kernel(y, eps, 0); };
  double acc = 0.0;
  // integrate piecewise across the cut-off kinks of the integrand's smoothness class
  const double breaks[] = {-support, -cutoff_inner_, 0.0, cutoff_inner_, support};
  for (int i = 0; i < 4; ++i) {
    const double a = std::max(breaks[i], -support);
    const double b = std::min(breaks[i + 1], hi);
    if (b <= a) continue;
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 8, 1e-12);
  }
  return acc;
}

Mollifier build_mollifier(int vanishing_moments, double cutoff_inner, double cutoff_outer,
                          double truncation) {
  return Mollifier(vanishing_moments, cutoff_inner, cutoff_outer, truncation);
}

double scale_of(ScaleMap map, double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw ScaleError("eps must lie in (0, 1]");
  double eta = eps;
  switch (map) {
    case ScaleMap::identity: eta = eps; break;
    case ScaleMap::inverse_log: eta = 1.0 / std::abs(std::log(eps)); break;
    case ScaleMap::inverse_log_log: eta = 1.0 / std::log(std::abs(std::log(eps))); break;
  }
  if (map != ScaleMap::identity && !(eta > 0.0 && eta < 1.0)) {
    std::ostringstream msg;
    msg << "kernel scale eta(" << eps << ") = " << eta << " for map " << to_string(map)
        << " is outside (0, 1)";
    throw ScaleError(msg.str());
  }
  return eta;
}

std::string to_string(ScaleMap map) {
  switch (map) {
    case ScaleMap::identity: return "identity";
    case ScaleMap::inverse_log: return "inverse_log";
    case ScaleMap::inverse_log_log: return "inverse_log_log";
  }
  return "identity";
}

ScaleMap scale_map_from_string(const std::string& name) {
  if (name == "identity") return ScaleMap::identity;
  if (name == "inverse_log") return ScaleMap::inverse_log;
  if (name == "inverse_log_log") return ScaleMap::inverse_log_log;
  throw ParameterError("unknown scale map '" + name + "'");
}

void EpsLadder::validate() const {
  if (!(eps0 > 0.0) || eps0 > 1.0) throw ParameterError("ladder eps0 must lie in (0, 1]");
  if (!(ratio > 0.0) || !(ratio < 1.0)) throw ParameterError("ladder ratio must lie in (0, 1)");
  if (count < 1) throw ParameterError("ladder needs at least one level");
}

std::vector<double> EpsLadder::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(count));
  double e = eps0;
  for (auto& v : out) {
    v = e;
    e *= ratio;
  }
  return out;
}

}  // namespace colhyp
