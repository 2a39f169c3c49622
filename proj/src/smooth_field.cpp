#include "colhyp/smooth_field.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "colhyp/detail/csv.hpp"
#include "colhyp/errors.hpp"

namespace colhyp {

Rect Rect::intersect(const Rect& o) const noexcept {
  return Rect{std::max(x_lo, o.x_lo), std::min(x_hi, o.x_hi), std::max(t_lo, o.t_lo),
              std::min(t_hi, o.t_hi)};
}

SmoothField::SmoothField(Rect domain, Evaluator eval, Provenance provenance,
                         Dependence dependence, int max_order)
    : impl_(std::make_shared<const Impl>(
          Impl{domain, std::move(eval), std::move(provenance), dependence, max_order, std::nullopt})) {
}

SmoothField SmoothField::constant(double c, Rect domain) {
  SmoothField f(domain, [c](double, double, int dx, int dt) { return dx + dt == 0 ? c : 0.0; },
                Provenance{0.0, 0, "constant"}, Dependence::none, 1 << 20);
  auto impl = std::make_shared<Impl>(*f.impl_);
  impl->constant = c;
  f.impl_ = std::move(impl);
  return f;
}

SmoothField SmoothField::of_x(std::function<double(double, int)> f, Rect domain,
                              Provenance provenance, int max_order) {
  return SmoothField(
      domain, [f = std::move(f)](double x, double, int dx, int) { return f(x, dx); },
      std::move(provenance), Dependence::x, max_order);
}

SmoothField SmoothField::of_t(std::function<double(double, int)> f, Rect domain,
                              Provenance provenance, int max_order) {
  return SmoothField(
      domain, [f = std::move(f)](double, double t, int, int dt) { return f(t, dt); },
      std::move(provenance), Dependence::t, max_order);
}

double SmoothField::derivative(double x, double t, int dx, int dt) const {
  const Impl& im = *impl_;
  if (dx < 0 || dt < 0) throw ParameterError("negative derivative order");
  if (im.constant) return dx + dt == 0 ? *im.constant : 0.0;
  if (!im.domain.contains(x, t)) {
    std::ostringstream msg;
    msg << "point (" << x << ", " << t << ") outside field domain [" << im.domain.x_lo << ", "
        << im.domain.x_hi << "] x [" << im.domain.t_lo << ", " << im.domain.t_hi << "] ("
        << im.provenance.source << ")";
    throw DomainError(msg.str());
  }
  const bool depends_x = im.dependence == Dependence::x || im.dependence == Dependence::xt;
  const bool depends_t = im.dependence == Dependence::t || im.dependence == Dependence::xt;
  if ((dx > 0 && !depends_x) || (dt > 0 && !depends_t)) return 0.0;
  if (dx + dt > im.max_order) {
    std::ostringstream msg;
    msg << "derivative order " << dx + dt << " exceeds field limit " << im.max_order << " ("
        << im.provenance.source << ")";
    throw ParameterError(msg.str());
  }
  return im.eval(x, t, dx, dt);
}

namespace {

Dependence merge(Dependence a, Dependence b) {
  const bool x = a == Dependence::x || a == Dependence::xt || b == Dependence::x || b == Dependence::xt;
  const bool t = a == Dependence::t || a == Dependence::xt || b == Dependence::t || b == Dependence::xt;
  if (x && t) return Dependence::xt;
  if (x) return Dependence::x;
  if (t) return Dependence::t;
  return Dependence::none;
}

}  // namespace

SmoothField combine(std::vector<SmoothField> inputs,
                    std::function<double(std::span<const double>)> op, std::string source) {
  Rect domain;
  Dependence dep = Dependence::none;
  bool all_constant = true;
  std::vector<double> constants;
  for (const auto& f : inputs) {
    domain = domain.intersect(f.domain());
    dep = merge(dep, f.dependence());
    if (auto c = f.constant_value()) constants.push_back(*c);
    else all_constant = false;
  }
  if (all_constant) return SmoothField::constant(op(constants), domain);
  auto eval = [inputs = std::move(inputs), op = std::move(op)](double x, double t, int, int) {
    double buf[16];
    std::vector<double> heap;
    double* vals = buf;
    if (inputs.size() > 16) {
      heap.resize(inputs.size());
      vals = heap.data();
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) vals[i] = inputs[i](x, t);
    return op(std::span<const double>(vals, inputs.size()));
  };
  return SmoothField(domain, std::move(eval), Provenance{0.0, 0, std::move(source)}, dep, 0);
}

SmoothField operator+(const SmoothField& a, const SmoothField& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return combine({a, b}, [](std::span<const double> v) { return v[0] + v[1]; }, "sum");
}

SmoothField operator*(const SmoothField& a, const SmoothField& b) {
  if (a.is_zero() || b.is_zero()) return SmoothField::constant(0.0, a.domain().intersect(b.domain()));
  return combine({a, b}, [](std::span<const double> v) { return v[0] * v[1]; }, "product");
}

SmoothField operator*(double s, const SmoothField& a) {
  if (s == 0.0 || a.is_zero()) return SmoothField::constant(0.0, a.domain());
  if (auto c = a.constant_value()) return SmoothField::constant(s * *c, a.domain());
  return combine({a}, [s](std::span<const double> v) { return s * v[0]; }, "scaled");
}

void write_csv(std::ostream& os, const SmoothField& f, const Grid2D& grid) {
  os << "x,t,value\n";
  for (std::size_t it = 0; it < grid.t.size(); ++it)
    for (std::size_t ix = 0; ix < grid.x.size(); ++ix)
      os << detail::format_number(grid.x[ix]) << ',' << detail::format_number(grid.t[it]) << ','
         << detail::format_number(f(grid.x[ix], grid.t[it])) << '\n';
}

}  // namespace colhyp
