#include "colhyp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "colhyp/detail/csv.hpp"
#include "colhyp/errors.hpp"
#include "colhyp/parallel.hpp"

namespace colhyp {

void EpsSeries::validate() const {
  if (eps.size() != values.size()) throw ShapeError("series eps and values differ in length");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || eps[i] > 1.0) throw ParameterError("series eps outside (0, 1]");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ParameterError("series eps must strictly decrease");
  }
}

void EpsSeries::write_csv(std::ostream& os) const {
  os << "eps,value\n";
  for (std::size_t i = 0; i < eps.size(); ++i)
    os << detail::format_number(eps[i]) << ',' << detail::format_number(values[i]) << '\n';
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::moderate: return "moderate";
    case Verdict::negligible: return "negligible";
    case Verdict::log_type: return "log-type";
    case Verdict::bounded: return "bounded";
    case Verdict::l1_type: return "L1-type";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string Classification::describe() const {
  std::ostringstream os;
  os << to_string(verdict);
  switch (verdict) {
    case Verdict::moderate: os << "(a=" << exponent << ")"; break;
    case Verdict::negligible: os << "-to-order(" << exponent << ")"; break;
    case Verdict::log_type:
    case Verdict::bounded:
    case Verdict::l1_type: os << "(c=" << constant << ")"; break;
    case Verdict::inconclusive: break;
  }
  os << " residual=" << residual;
  if (!note.empty()) os << " [" << note << "]";
  return os.str();
}

namespace {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

LineFit fit_constant(const std::vector<double>& y) {
  const auto n = static_cast<double>(y.size());
  LineFit f;
  f.intercept = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : y) ss += (v - f.intercept) * (v - f.intercept);
  f.residual = std::sqrt(ss / n);
  return f;
}

}  // namespace

Classification classify(const EpsSeries& series, const ClassifyOptions& options) {
  series.validate();
  if (series.values.size() < 5) throw ParameterError("classification needs at least five ladder points");
  Classification c;
  for (double v : series.values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      c.note = "non-positive or non-finite measurement";
      return c;
    }
  }
  const std::size_t n = series.values.size();
  std::vector<double> y(n), log_inv(n), inv(n), loglog(n);
  bool loglog_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::log(series.values[i]);
    log_inv[i] = std::log(1.0 / series.eps[i]);
    inv[i] = 1.0 / series.eps[i];
    const double l = std::abs(std::log(series.eps[i]));
    if (l > 0.0) loglog[i] = y[i] - std::log(l);
    else loglog_ok = false;
  }
  c.power = fit_line(log_inv, y);
  c.flat = fit_constant(y);
  c.exponential = fit_line(inv, y);
  if (loglog_ok) c.logarithmic = fit_constant(loglog);
  else c.logarithmic.residual = std::numeric_limits<double>::infinity();

  const double good = options.good_residual;
  const double a = c.power.slope;

  // Decay: superpolynomial (exponential fit) or at a certified power order.
  const bool exp_decay = c.exponential.slope < -good && c.exponential.residual < good &&
                         c.exponential.residual <= c.power.residual;
  const bool power_decay = a <= -1.0 && c.power.residual < good;
  if (exp_decay || power_decay) {
    c.verdict = Verdict::negligible;
    if (exp_decay) {
      c.exponent = options.b_max;
      c.residual = c.exponential.residual;
      c.note = "exponential decay rate " + std::to_string(c.exponential.slope);
    } else {
      c.exponent = std::min<double>(std::floor(-a + 1e-9), options.b_max);
      c.residual = c.power.residual;
    }
    return c;
  }
  // Growth faster than every power: not moderate.
  if (c.exponential.slope > good && c.exponential.residual < good &&
      c.exponential.residual < c.power.residual - options.tie) {
    c.verdict = Verdict::inconclusive;
    c.exponent = c.exponential.slope;
    c.residual = c.exponential.residual;
    c.note = "superpolynomial growth, not moderate";
    return c;
  }

  const double best = std::min({c.flat.residual, c.logarithmic.residual, c.power.residual});
  if (c.flat.residual <= best + options.tie) {
    c.verdict = Verdict::bounded;
    c.constant = std::exp(c.flat.intercept);
    c.residual = c.flat.residual;
  } else if (c.logarithmic.residual <= best + options.tie) {
    c.verdict = Verdict::log_type;
    c.constant = std::exp(c.logarithmic.intercept);
    c.residual = c.logarithmic.residual;
  } else if (a <= 0.0) {
    // A non-growing power law is bounded by its largest value.
    c.verdict = Verdict::bounded;
    c.constant = *std::max_element(series.values.begin(), series.values.end());
    c.residual = c.power.residual;
  } else {
    c.verdict = Verdict::moderate;
    c.exponent = a;
    c.constant = std::exp(c.power.intercept);
    c.residual = c.power.residual;
  }
  if (c.verdict == Verdict::bounded && series.descriptor.time_l1) c.verdict = Verdict::l1_type;
  if (c.residual >= good && c.verdict != Verdict::bounded && c.verdict != Verdict::l1_type)
    c.note = "poor fit";
  return c;
}

namespace {

struct SamplePlan {
  std::vector<double> xs;
  std::vector<double> ts;
  bool x_axis = true;
};

SamplePlan plan_samples(const SmoothField& f, const Rect& K, double eps, const SupSampling& s) {
  auto axis_points = [&](double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ParameterError("sup region K must be bounded");
    if (hi <= lo) return std::vector<double>{lo};
    const double step = s.resolution * eps;
    const auto count = std::min<std::size_t>(
        s.max_points_per_axis, static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1);
    return Grid1D::from_bounds(lo, hi, std::max<std::size_t>(count, 2)).points();
  };
  SamplePlan p;
  const bool dx = f.dependence() == Dependence::x || f.dependence() == Dependence::xt;
  const bool dt = f.dependence() == Dependence::t || f.dependence() == Dependence::xt;
  p.xs = dx ? axis_points(K.x_lo, K.x_hi) : std::vector<double>{std::isfinite(K.x_lo) ? K.x_lo : 0.0};
  p.ts = dt ? axis_points(K.t_lo, K.t_hi) : std::vector<double>{std::isfinite(K.t_lo) ? K.t_lo : 0.0};
  p.x_axis = dx;
  return p;
}

}  // namespace

MeasuredSeries measure_series(const FieldFactory& factory, const NormDescriptor& descriptor,
                              const std::vector<double>& eps, const SupSampling& sampling,
                              std::size_t jobs) {
  const int p = descriptor.p;
  if (p < p_infinity) throw ParameterError("norm exponent must be 0, >= 1 or p_infinity");
  const std::size_t n = std::max<std::size_t>(1, descriptor.samples);
  MeasuredSeries out;
  out.norm_of_sup.descriptor = descriptor;
  out.sup_of_norm.descriptor = descriptor;
  out.sup_of_norm.descriptor.quantity = "sup_of_norm(" + descriptor.quantity + ")";
  for (double e : eps) {
    std::vector<std::vector<double>> abs_values(n);
    std::vector<double> sups(n, 0.0);
    parallel_for(n, jobs, [&](std::size_t s) {
      const SmoothField f = factory(e, s);
      const SamplePlan plan = plan_samples(f, descriptor.K, e, sampling);
      auto& vals = abs_values[s];
      vals.reserve(plan.xs.size() * plan.ts.size());
      for (double t : plan.ts)
        for (double x : plan.xs) {
          const double v = plan.x_axis ? f.derivative(x, t, descriptor.alpha, 0)
                                       : f.derivative(x, t, 0, descriptor.alpha);
          vals.push_back(std::abs(v));
          sups[s] = std::max(sups[s], std::abs(v));
        }
    });
    const std::size_t points = abs_values[0].size();
    for (const auto& v : abs_values)
      if (v.size() != points) throw ShapeError("samples produced different sampling plans");
    double norm_sup = 0.0;
    double sup_norm = 0.0;
    if (p == 0) {
      norm_sup = sups[0];
      sup_norm = sups[0];
    } else if (p == p_infinity) {
      norm_sup = *std::max_element(sups.begin(), sups.end());
      for (std::size_t k = 0; k < points; ++k) {
        double m = 0.0;
        for (std::size_t s = 0; s < n; ++s) m = std::max(m, abs_values[s][k]);
        sup_norm = std::max(sup_norm, m);
      }
    } else {
      const double pp = p;
      double acc = 0.0;
      for (double v : sups) acc += std::pow(v, pp);
      norm_sup = std::pow(acc / static_cast<double>(n), 1.0 / pp);
      for (std::size_t k = 0; k < points; ++k) {
        double m = 0.0;
        for (std::size_t s = 0; s < n; ++s) m += std::pow(abs_values[s][k], pp);
        sup_norm = std::max(sup_norm, std::pow(m / static_cast<double>(n), 1.0 / pp));
      }
    }
    if (p != 0) {
      ++out.interchange_checks;
      if (sup_norm > norm_sup * (1.0 + 1e-12)) out.interchange_holds = false;
    }
    out.norm_of_sup.eps.push_back(e);
    out.norm_of_sup.values.push_back(norm_sup);
    out.sup_of_norm.eps.push_back(e);
    out.sup_of_norm.values.push_back(sup_norm);
    out.pathwise.push_back(std::move(sups));
  }
  return out;
}

double pair_with(const std::function<double(double)>& u, const TestFunction& psi, double panel) {
  if (!(psi.hi > psi.lo)) throw ParameterError("test function support must be an interval");
  const auto panels = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil((psi.hi - psi.lo) / panel)), 1, 100000);
  const double w = (psi.hi - psi.lo) / static_cast<double>(panels);
  double acc = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = psi.lo + static_cast<double>(k) * w;
    acc += boost::math::quadrature::gauss<double, 10>::integrate(
        [&](double x) { return u(x) * psi.psi(x); }, a, a + w);
  }
  return acc;
}

std::function<double(const TestFunction&)> function_reference(std::function<double(double)> v) {
  return [v = std::move(v)](const TestFunction& psi) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double x) { return v(x) * psi.psi(x); }, psi.lo, psi.hi, 15, 1e-13);
  };
}

AssociationReport association_check(const FieldFactory& factory,
                                    const std::function<double(const TestFunction&)>& reference,
                                    const std::vector<TestFunction>& tests,
                                    const std::vector<double>& eps, std::size_t n_samples,
                                    double tolerance, std::size_t jobs) {
  if (n_samples == 0) throw ParameterError("association check needs at least one sample");
  AssociationReport r;
  r.eps = eps;
  std::vector<double> refs;
  for (const auto& t : tests) refs.push_back(reference(t));
  for (double e : eps) {
    std::vector<std::vector<double>> pairings(n_samples, std::vector<double>(tests.size()));
    parallel_for(n_samples, jobs, [&](std::size_t s) {
      const SmoothField f = factory(e, s);
      for (std::size_t k = 0; k < tests.size(); ++k) {
        const auto& t = tests[k];
        if (!f.domain().contains(t.lo, 0.0) || !f.domain().contains(t.hi, 0.0))
          throw DomainError("test function '" + t.name + "' not supported inside the field's domain");
        // Panels resolve both the field scale eps and the test function itself.
        pairings[s][k] = pair_with([&](double x) { return f(x, 0.0); }, t, std::min(e, (t.hi - t.lo) / 16.0));
      }
    });
    std::vector<double> gaps(tests.size()), ses(tests.size());
    for (std::size_t k = 0; k < tests.size(); ++k) {
      double mean = 0.0, m2 = 0.0;
      for (std::size_t s = 0; s < n_samples; ++s) {
        const double d = pairings[s][k] - refs[k];
        const double delta = d - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (d - mean);
      }
      gaps[k] = std::abs(mean);
      ses[k] = n_samples > 1 ? std::sqrt(m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples)) : 0.0;
    }
    r.gaps.push_back(std::move(gaps));
    r.standard_errors.push_back(std::move(ses));
  }
  r.decreasing = true;
  r.below_tolerance = !eps.empty();
  for (std::size_t k = 0; k < tests.size(); ++k) {
    for (std::size_t l = 1; l < eps.size(); ++l) {
      const double noise = 2.0 * (r.standard_errors[l][k] + r.standard_errors[l - 1][k]);
      if (r.gaps[l][k] > r.gaps[l - 1][k] + noise) r.decreasing = false;
    }
    if (!eps.empty() && r.gaps.back()[k] > tolerance + 3.0 * r.standard_errors.back()[k])
      r.below_tolerance = false;
  }
  return r;
}

MomentEstimate sample_moments(const SampleFactory& factory, int p, std::size_t n_samples,
                              std::size_t jobs) {
  if (p < 1) throw ParameterError("moment order must be >= 1");
  if (n_samples == 0) throw ParameterError("moments need samples");
  MomentEstimate est;
  est.p = p;
  est.samples = n_samples;
  std::vector<double> m2;
  constexpr std::size_t chunk = 256;
  for (std::size_t begin = 0; begin < n_samples; begin += chunk) {
    const std::size_t count = std::min(chunk, n_samples - begin);
    std::vector<std::vector<double>> batch(count);
    parallel_for(count, jobs, [&](std::size_t k) { batch[k] = factory(begin + k); });
    for (std::size_t k = 0; k < count; ++k) {
      const auto& v = batch[k];
      if (est.mean.empty()) {
        est.mean.assign(v.size(), 0.0);
        m2.assign(v.size(), 0.0);
      }
      if (v.size() != est.mean.size()) throw ShapeError("samples differ in length");
      const double seen = static_cast<double>(begin + k + 1);
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = p == 1 ? v[i] : std::pow(v[i], p);
        const double delta = x - est.mean[i];
        est.mean[i] += delta / seen;
        m2[i] += delta * (x - est.mean[i]);
      }
    }
  }
  est.standard_error.resize(est.mean.size());
  const auto n = static_cast<double>(n_samples);
  for (std::size_t i = 0; i < m2.size(); ++i)
    est.standard_error[i] = n_samples > 1 ? std::sqrt(m2[i] / (n - 1.0) / n) : 0.0;
  return est;
}

MomentField moment_field(const SolutionFactory& factory, std::size_t component, int p,
                         const Grid2D& grid, std::size_t n_samples, std::size_t jobs) {
  if (n_samples < 100) throw ParameterError("moment_field needs at least 100 samples");
  return MomentField{grid, sample_moments(
      [&](std::size_t s) {
        const SolutionField sol = factory(s);
        if (!(sol.grid() == grid)) throw ShapeError("sample solution grid differs from the moment grid");
        std::vector<double> v(grid.size(), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t it = 0; it < grid.t.size(); ++it)
          for (std::size_t ix = 0; ix < grid.x.size(); ++ix)
            if (sol.valid(ix, it)) v[grid.index(ix, it)] = sol.at_node(component, ix, it);
        return v;
      },
      p, n_samples, jobs)};
}

CovarianceEstimate autocovariance(const SampleFactory& factory, std::size_t n_samples,
                                  std::size_t jobs) {
  if (n_samples < 100) throw ParameterError("autocovariance needs at least 100 samples");
  std::vector<std::vector<double>> data(n_samples);
  parallel_for(n_samples, jobs, [&](std::size_t s) { data[s] = factory(s); });
  CovarianceEstimate c;
  c.dim = data[0].size();
  c.samples = n_samples;
  for (const auto& v : data)
    if (v.size() != c.dim) throw ShapeError("samples differ in length");
  const auto n = static_cast<double>(n_samples);
  c.mean.assign(c.dim, 0.0);
  for (const auto& v : data)
    for (std::size_t i = 0; i < c.dim; ++i) c.mean[i] += v[i];
  for (double& m : c.mean) m /= n;
  c.covariance.assign(c.dim * c.dim, 0.0);
  c.standard_error.assign(c.dim * c.dim, 0.0);
  for (std::size_t i = 0; i < c.dim; ++i)
    for (std::size_t j = i; j < c.dim; ++j) {
      double s1 = 0.0;
      for (const auto& v : data) s1 += (v[i] - c.mean[i]) * (v[j] - c.mean[j]);
      const double cov = s1 / (n - 1.0);
      double s2 = 0.0;
      for (const auto& v : data) {
        const double d = (v[i] - c.mean[i]) * (v[j] - c.mean[j]) - cov;
        s2 += d * d;
      }
      const double se = std::sqrt(s2 / (n - 1.0) / n);
      c.covariance[i * c.dim + j] = c.covariance[j * c.dim + i] = cov;
      c.standard_error[i * c.dim + j] = c.standard_error[j * c.dim + i] = se;
    }
  return c;
}

CovarianceEstimate autocovariance(const SolutionFactory& factory, std::size_t component,
                                  const std::vector<std::pair<double, double>>& points,
                                  std::size_t n_samples, std::size_t jobs) {
  return autocovariance(
      [&](std::size_t s) {
        const SolutionField sol = factory(s);
        std::vector<double> v;
        v.reserve(points.size());
        for (const auto& [x, t] : points) v.push_back(sol(component, x, t));
        return v;
      },
      n_samples, jobs);
}

double ExponentialTailFamily::value(double eps, double omega) const {
  return omega >= threshold(eps) ? std::exp(1.0 / eps) : 0.0;
}

double ExponentialTailFamily::moment(double eps, double p) const {
  // E(u^p) = exp(p/eps) * P(omega >= p'/eps) = exp(p/eps) exp(-p'/eps)
  return std::exp((p - p_prime) / eps);
}

long double SlidingSpikeFamily::value(long double eps, long double omega) const {
  const long double theta = 1.0L / eps;
  const long double delta = std::exp(-theta);
  return std::abs(omega - std::sin(theta)) < delta ? std::exp(theta) : 0.0L;
}

double SlidingSpikeFamily::mean_abs(double eps) const {
  const double theta = 1.0 / eps;
  const double delta = std::exp(-theta);
  const double s = std::sin(theta);
  if (std::abs(s) + delta <= 1.0) return 1.0;  // spike entirely inside [-1, 1]
  const double lo = std::max(s - delta, -1.0);
  const double hi = std::min(s + delta, 1.0);
  return 0.5 * std::exp(theta) * std::max(0.0, hi - lo);
}

std::vector<long double> SlidingSpikeFamily::planted_subsequence(long double omega, int count) const {
  if (!(omega >= -1.0L && omega <= 1.0L)) throw ParameterError("omega must lie in [-1, 1]");
  constexpr long double two_pi = 6.283185307179586476925286766559005768L;
  std::vector<long double> out;
  for (int k = 1; k <= count; ++k) out.push_back(1.0L / (std::asin(omega) + two_pi * k));
  return out;
}

}  // namespace colhyp
