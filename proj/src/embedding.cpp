#include "colhyp/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "colhyp/errors.hpp"

namespace colhyp {

namespace {

Rect axis_rect(Axis axis, double lo, double hi) {
  return axis == Axis::x ? Rect::x_interval(lo, hi) : Rect::t_interval(lo, hi);
}

Dependence axis_dependence(Axis axis) { return axis == Axis::x ? Dependence::x : Dependence::t; }

SmoothField embed_impl(const SampledProcess& p, const Mollifier& m, double eps, double eta,
                       int order, Axis axis, const std::string& label) {
  if (!(eps > 0.0) || eps > 1.0) throw ParameterError("embedding needs eps in (0, 1]");
  if (order < 0 || order > Mollifier::max_derivative)
    throw ParameterError("embedding derivative order out of range");
  if (p.values.size() != p.grid.size()) throw ShapeError("path values do not match its grid");
  if (p.grid.size() < 2) throw InvalidGridError("embedding needs a path with at least two nodes");
  if (p.grid.step() > eta / 8.0 * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "path step " << p.grid.step() << " exceeds eps/8 = " << eta / 8.0 << " for '" << p.tag
        << "'";
    throw ResolutionError(msg.str());
  }
  const auto [lo, hi] = safe_interval(p.grid, m, eta);
  if (lo > hi) throw DomainError("path too short for the kernel support of '" + p.tag + "'");

  struct Data {
    Grid1D grid;
    std::vector<double> values;
    Mollifier m;
    double eta;
    int order;
  };
  auto data = std::make_shared<const Data>(Data{p.grid, p.values, m, eta, order});

  auto conv = [data](double z, int k) {
    const Data& d = *data;
    const double support = d.m.support_radius(d.eta);
    const double h = d.grid.step();
    const double x0 = d.grid.lower();
    const auto n = static_cast<long>(d.grid.size());
    const long first = std::max(0L, static_cast<long>(std::ceil((z - support - x0) / h)));
    const long last = std::min(n - 1, static_cast<long>(std::floor((z + support - x0) / h)));
    double acc = 0.0;
    for (long j = first; j <= last; ++j) {
      const double y = x0 + static_cast<double>(j) * h;
      acc += d.m.kernel(z - y, d.eta, k) * d.values[static_cast<std::size_t>(j)];
    }
    return acc * h;
  };

  Provenance prov{eps, p.seed, label + "(" + p.tag + ")"};
  const int max_order = Mollifier::max_derivative - order;
  SmoothField::Evaluator eval;
  if (axis == Axis::x)
    eval = [conv, order](double x, double, int dx, int) { return conv(x, order + dx); };
  else
    eval = [conv, order](double, double t, int, int dt) { return conv(t, order + dt); };
  return SmoothField(axis_rect(axis, lo, hi), std::move(eval), std::move(prov),
                     axis_dependence(axis), max_order);
}

}  // namespace

std::pair<double, double> safe_interval(const Grid1D& grid, const Mollifier& m, double eta) {
  const double r = m.support_radius(eta);
  return {grid.lower() + r, grid.upper() - r};
}

SmoothField embed_path(const SampledProcess& p, const Mollifier& m, double eps, Axis axis) {
  return embed_impl(p, m, eps, eps, 0, axis, "embed");
}

SmoothField embed_derivative(const SampledProcess& p, const Mollifier& m, double eps, int order,
                             Axis axis) {
  return embed_impl(p, m, eps, eps, order, axis, "embed_d" + std::to_string(order));
}

SmoothField scaled_embed(const SampledProcess& p, const Mollifier& m, double eps, ScaleMap map,
                         Axis axis, int order) {
  const double eta = scale_of(map, eps);
  return embed_impl(p, m, eps, eta, order, axis, "embed_" + to_string(map));
}

SmoothField tabulate_field(const SmoothField& f, const Grid1D& grid, Axis axis, int orders) {
  if (orders < 0) throw ParameterError("tabulation order must be non-negative");
  if (grid.size() < 2) throw InvalidGridError("tabulation needs at least two nodes");
  if (f.dependence() == Dependence::xt)
    throw ParameterError("tabulate_field expects a field of one variable");
  const std::size_t n = grid.size();
  const auto levels = static_cast<std::size_t>(orders) + 2;
  auto table = std::make_shared<std::vector<std::vector<double>>>(levels, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = grid[i];
    for (std::size_t k = 0; k < levels; ++k) {
      const int ki = static_cast<int>(k);
      (*table)[k][i] = axis == Axis::x ? f.derivative(z, 0.0, ki, 0) : f.derivative(0.0, z, 0, ki);
    }
  }
  auto hermite = [table, grid](double z, int k) {
    const auto& v = (*table)[static_cast<std::size_t>(k)];
    const auto& s = (*table)[static_cast<std::size_t>(k) + 1];
    const double h = grid.step();
    double pos = (z - grid.lower()) / h;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(grid.size() - 2)));
    const double u = pos - static_cast<double>(i);
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * v[i] + (u3 - 2 * u2 + u) * h * s[i] + (-2 * u3 + 3 * u2) * v[i + 1] +
           (u3 - u2) * h * s[i + 1];
  };
  SmoothField::Evaluator eval;
  if (axis == Axis::x)
    eval = [hermite](double x, double, int dx, int) { return hermite(x, dx); };
  else
    eval = [hermite](double, double t, int, int dt) { return hermite(t, dt); };
  Provenance prov = f.provenance();
  prov.source = "tabulated(" + prov.source + ")";
  return SmoothField(axis_rect(axis, grid.lower(), grid.upper()).intersect(f.domain()),
                     std::move(eval), std::move(prov), axis_dependence(axis), orders);
}

SmoothField spline_field(const SampledProcess& p, Axis axis) {
  if (p.values.size() != p.grid.size() || p.grid.size() < 4)
    throw ShapeError("spline needs a path with at least four nodes");
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto spline = std::make_shared<const Spline>(p.values.begin(), p.values.end(), p.grid.lower(),
                                               p.grid.step());
  auto eval1 = [spline](double z, int k) {
    switch (k) {
      case 0: return (*spline)(z);
      case 1: return spline->prime(z);
      default: return spline->double_prime(z);
    }
  };
  SmoothField::Evaluator eval;
  if (axis == Axis::x)
    eval = [eval1](double x, double, int dx, int) { return eval1(x, dx); };
  else
    eval = [eval1](double, double t, int, int dt) { return eval1(t, dt); };
  return SmoothField(axis_rect(axis, p.grid.lower(), p.grid.upper()), std::move(eval),
                     Provenance{0.0, p.seed, "spline(" + p.tag + ")"}, axis_dependence(axis), 2);
}

}  // namespace colhyp
