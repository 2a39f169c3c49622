#include "colhyp/hypsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "colhyp/detail/csv.hpp"
#include "colhyp/errors.hpp"

namespace colhyp {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

bool depends_on_t(const SmoothField& f) {
  return f.dependence() == Dependence::t || f.dependence() == Dependence::xt;
}

/// Lagrange interpolation through `count` equally spaced samples values[first..], at
/// fractional offset `s` measured in steps from the first sample.
double lagrange(const double* values, std::size_t count, double s) {
  double acc = 0.0;
  for (std::size_t a = 0; a < count; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < count; ++b)
      if (b != a) w *= (s - static_cast<double>(b)) / (static_cast<double>(a) - static_cast<double>(b));
    acc += w * values[a];
  }
  return acc;
}

/// Stencil of up to four nodes inside [first, last] around position `pos` (in index units).
std::pair<std::size_t, std::size_t> stencil(double pos, std::size_t first, std::size_t last) {
  const std::size_t count = std::min<std::size_t>(4, last - first + 1);
  const double lo = static_cast<double>(first);
  const double hi = static_cast<double>(last + 1 - count);
  const double offset = count >= 3 ? 1.0 : 0.0;
  const double start = std::clamp(std::floor(pos) - offset, lo, hi);
  return {static_cast<std::size_t>(start), count};
}

}  // namespace

void HyperbolicProblem::validate() const {
  const std::size_t n = lambda.size();
  if (n == 0) throw ShapeError("hyperbolic problem needs at least one component");
  if (f.size() != n || g.size() != n || u0.size() != n) throw ShapeError("problem component counts differ");
  for (const auto& row : f)
    if (row.size() != n) throw ShapeError("coupling matrix f must be n x n");
  domain.validate();
}

HyperbolicProblem HyperbolicProblem::scalar(SmoothField lambda, SmoothField f, SmoothField g,
                                            SmoothField u0, DeterminacyDomain domain) {
  HyperbolicProblem p;
  p.lambda = {std::move(lambda)};
  p.f = {{std::move(f)}};
  p.g = {std::move(g)};
  p.u0 = {std::move(u0)};
  p.domain = domain;
  return p;
}

SolutionField::SolutionField(Grid2D grid, std::size_t components, DeterminacyDomain domain)
    : grid_(std::move(grid)),
      n_(components),
      domain_(domain),
      values_(components * grid_.x.size() * grid_.t.size(), nan_value),
      ranges_(grid_.t.size()) {
  for (std::size_t it = 0; it < grid_.t.size(); ++it) {
    const double w = domain_.half_width(grid_.t[it]) + 1e-12;
    std::size_t first = grid_.x.size();
    std::size_t last = 0;
    for (std::size_t ix = 0; ix < grid_.x.size(); ++ix) {
      if (std::abs(grid_.x[ix]) <= w && std::abs(grid_.t[it]) <= domain_.T + 1e-12) {
        first = std::min(first, ix);
        last = ix;
      }
    }
    ranges_[it] = first <= last ? std::pair{first, last} : std::pair<std::size_t, std::size_t>{1, 0};
  }
}

bool SolutionField::valid(std::size_t ix, std::size_t it) const noexcept {
  const auto [first, last] = ranges_[it];
  return first <= last && ix >= first && ix <= last;
}

void SolutionField::set_valid_range(std::size_t it, std::size_t first, std::size_t last) {
  ranges_.at(it) = {first, last};
}

double SolutionField::interpolate_level(std::size_t i, std::size_t it, double x) const {
  const auto [first, last] = ranges_[it];
  if (first > last) throw DomainError("interpolation on an empty time level");
  const double pos = (x - grid_.x.lower()) / grid_.x.step();
  const auto [start, count] = stencil(pos, first, last);
  return lagrange(&values_[(i * grid_.t.size() + it) * grid_.x.size() + start], count,
                  pos - static_cast<double>(start));
}

double SolutionField::operator()(std::size_t i, double x, double t) const {
  if (i >= n_) throw ShapeError("solution component out of range");
  if (!domain_.contains(x, t, 1e-9) || !grid_.t.contains(t, 1e-9)) {
    std::ostringstream msg;
    msg << "(" << x << ", " << t << ") outside the solution's domain";
    throw DomainError(msg.str());
  }
  const std::size_t nt = grid_.t.size();
  if (nt == 1) return interpolate_level(i, 0, x);
  const double pos = (t - grid_.t.lower()) / grid_.t.step();
  const auto [start, count] = stencil(pos, 0, nt - 1);
  double vals[4];
  for (std::size_t a = 0; a < count; ++a) vals[a] = interpolate_level(i, start + a, x);
  return lagrange(vals, count, pos - static_cast<double>(start));
}

void SolutionField::write_csv(std::ostream& os) const {
  os << "x,t";
  for (std::size_t i = 0; i < n_; ++i) os << ",u" << i + 1;
  os << '\n';
  for (std::size_t it = 0; it < grid_.t.size(); ++it) {
    const auto [first, last] = ranges_[it];
    for (std::size_t ix = first; ix <= last && first <= last; ++ix) {
      os << detail::format_number(grid_.x[ix]) << ',' << detail::format_number(grid_.t[it]);
      for (std::size_t i = 0; i < n_; ++i) os << ',' << detail::format_number(at_node(i, ix, it));
      os << '\n';
    }
  }
}

namespace {

/// f(x, -t) scaled by `sign`, for time reversal.
SmoothField mirrored(const SmoothField& f, double sign) {
  if (auto c = f.constant_value()) return SmoothField::constant(sign * *c);
  Rect d = f.domain();
  Rect r{d.x_lo, d.x_hi, -d.t_hi, -d.t_lo};
  return SmoothField(
      r,
      [f, sign](double x, double t, int dx, int dt) {
        return sign * (dt % 2 == 0 ? 1.0 : -1.0) * f.derivative(x, -t, dx, dt);
      },
      f.provenance(), f.dependence(), f.max_order());
}

SolutionField solve_forward(const HyperbolicProblem& problem, const Grid2D& grid,
                            const SolverOptions& options) {
  const std::size_t n = problem.size();
  const DeterminacyDomain& dom = problem.domain;
  const Grid1D& xs = grid.x;
  const Grid1D& ts = grid.t;
  const std::size_t nx = xs.size();
  const std::size_t nt = ts.size();
  const double dt = nt > 1 ? ts.step() : 0.0;
  const int substeps = std::max(1, options.substeps);

  SolutionField sol(grid, n, dom);

  // Level 0: the data.
  {
    const auto [first, last] = sol.valid_range(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ix = first; ix <= last && first <= last; ++ix)
        sol.at_node(i, ix, 0) = problem.u0[i](xs[ix], 0.0);
  }
  if (nt == 1) return sol;

  // Characteristic feet on level m-1 of every valid node on level m.
  std::vector<std::vector<double>> feet(n, std::vector<double>(nx * nt, nan_value));
  auto backward_foot = [&](std::size_t i, double x, double t) {
    double y = x;
    const double h = -dt / substeps;
    for (int s = 0; s < substeps; ++s) y = rk4_step(problem.lambda[i], y, t + s * h, h);
    return y;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const SmoothField& lam = problem.lambda[i];
    const bool time_dependent = depends_on_t(lam) && !lam.constant_value();
    std::vector<double> x_only;
    if (!time_dependent) {
      const auto [first, last] = sol.valid_range(1);
      x_only.assign(nx, nan_value);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix)
        x_only[ix] = backward_foot(i, xs[ix], ts[1]);
    }
    for (std::size_t it = 1; it < nt; ++it) {
      const auto [first, last] = sol.valid_range(it);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix)
        feet[i][it * nx + ix] = time_dependent ? backward_foot(i, xs[ix], ts[it]) : x_only[ix];
    }
  }

  // Tabulated coupling and forcing on valid nodes; null entries are identically zero.
  std::vector<std::vector<std::vector<double>>> f_tab(n, std::vector<std::vector<double>>(n));
  std::vector<std::vector<double>> g_tab(n);
  auto tabulate = [&](const SmoothField& field, std::vector<double>& out) {
    if (field.is_zero()) return;
    out.assign(nx * nt, 0.0);
    for (std::size_t it = 0; it < nt; ++it) {
      const auto [first, last] = sol.valid_range(it);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix) out[it * nx + ix] = field(xs[ix], ts[it]);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) tabulate(problem.f[i][j], f_tab[i][j]);
    tabulate(problem.g[i], g_tab[i]);
  }

  // Source F_i = sum_j f_ij u_j + g_i on valid nodes, from the previous iterate.
  auto compute_source = [&](const SolutionField* prev, SolutionField& source) {
    for (std::size_t it = 0; it < nt; ++it) {
      const auto [first, last] = sol.valid_range(it);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix)
        for (std::size_t i = 0; i < n; ++i) {
          double acc = g_tab[i].empty() ? 0.0 : g_tab[i][it * nx + ix];
          if (prev)
            for (std::size_t j = 0; j < n; ++j)
              if (!f_tab[i][j].empty()) acc += f_tab[i][j][it * nx + ix] * prev->at_node(j, ix, it);
          source.at_node(i, ix, it) = acc;
        }
    }
  };

  SolutionField source(grid, n, dom);
  SolutionField current = sol;
  bool have_prev = false;
  double diff = std::numeric_limits<double>::infinity();
  int iter = 0;
  while (iter < options.max_iter) {
    compute_source(have_prev ? &current : nullptr, source);
    SolutionField next = sol;  // level 0 filled
    for (std::size_t it = 1; it < nt; ++it) {
      const auto [first, last] = sol.valid_range(it);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t ix = first; ix <= last && first <= last; ++ix) {
          const double foot = feet[i][it * nx + ix];
          const double transported = next.interpolate_level(i, it - 1, foot);
          const double src_foot = source.interpolate_level(i, it - 1, foot);
          next.at_node(i, ix, it) = transported + 0.5 * dt * (src_foot + source.at_node(i, ix, it));
        }
    }
    ++iter;
    diff = 0.0;
    for (std::size_t it = 0; it < nt; ++it) {
      const auto [first, last] = sol.valid_range(it);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix)
        for (std::size_t i = 0; i < n; ++i) {
          const double prev = have_prev ? current.at_node(i, ix, it) : 0.0;
          diff = std::max(diff, std::abs(next.at_node(i, ix, it) - prev));
        }
    }
    if (!std::isfinite(diff)) throw Error("non-finite values in the Picard sweep");
    current = std::move(next);
    have_prev = true;
    if (diff <= options.tol) break;
  }
  if (diff > options.tol) {
    std::ostringstream msg;
    msg << "Picard iteration did not reach tol " << options.tol << " after " << iter
        << " sweeps (last difference " << diff << ")";
    throw IterationLimitError(msg.str(), iter, diff);
  }
  current.iterations = iter;
  current.final_difference = diff;

  // Audit: the discrete integral equation at random nodes, with feet recomputed by the
  // public characteristic integrator and the source rebuilt from the final iterate.
  compute_source(&current, source);
  std::vector<std::pair<std::size_t, std::size_t>> nodes;
  for (std::size_t it = 1; it < nt; ++it) {
    const auto [first, last] = sol.valid_range(it);
    for (std::size_t ix = first; ix <= last && first <= last; ++ix) nodes.emplace_back(ix, it);
  }
  double residual = 0.0;
  if (!nodes.empty() && options.audit_points > 0) {
    std::mt19937_64 rng(options.audit_seed);
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    for (std::size_t a = 0; a < options.audit_points; ++a) {
      const auto [ix, it] = nodes[pick(rng)];
      for (std::size_t i = 0; i < n; ++i) {
        const auto curve = integrate_characteristic(problem.lambda[i], xs[ix], ts[it], ts[it - 1],
                                                    dt / substeps, static_cast<int>(i));
        const double foot = curve.end_position();
        const double rhs = current.interpolate_level(i, it - 1, foot) +
                           0.5 * dt * (source.interpolate_level(i, it - 1, foot) + source.at_node(i, ix, it));
        residual = std::max(residual, std::abs(current.at_node(i, ix, it) - rhs));
      }
    }
  }
  current.audit_residual = residual;
  if (residual > 10.0 * options.tol) {
    std::ostringstream msg;
    msg << "solver audit failed: integral-equation residual " << residual << " exceeds "
        << 10.0 * options.tol;
    throw Error(msg.str());
  }
  return current;
}

}  // namespace

SolutionField solve_system(const HyperbolicProblem& problem, const Grid2D& grid,
                           const SolverOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0) || options.max_iter < 1) throw ParameterError("invalid solver tolerance");
  const DeterminacyDomain& dom = problem.domain;
  if (grid.x.lower() > -dom.kappa + 1e-9 || grid.x.upper() < dom.kappa - 1e-9)
    throw ShapeError("solver grid must cover [-kappa, kappa]");
  const bool forward = std::abs(grid.t.lower()) <= 1e-12 && std::abs(grid.t.upper() - dom.T) <= 1e-9;
  const bool backward = std::abs(grid.t.upper()) <= 1e-12 && std::abs(grid.t.lower() + dom.T) <= 1e-9;
  if (forward) return solve_forward(problem, grid, options);
  if (!backward) throw ShapeError("solver time grid must be [0, T] or [-T, 0]");

  // Time reversal: u'(x, t) = u(x, -t) solves d_t u' - Lambda d_x u' = -f u' - g.
  HyperbolicProblem rev = problem;
  const std::size_t n = problem.size();
  for (std::size_t i = 0; i < n; ++i) {
    rev.lambda[i] = mirrored(problem.lambda[i], -1.0);
    rev.g[i] = mirrored(problem.g[i], -1.0);
    for (std::size_t j = 0; j < n; ++j) rev.f[i][j] = mirrored(problem.f[i][j], -1.0);
  }
  const Grid2D rgrid{grid.x, Grid1D(0.0, grid.t.step(), grid.t.size())};
  const SolutionField rsol = solve_forward(rev, rgrid, options);
  SolutionField sol(grid, n, dom);
  const std::size_t nt = grid.t.size();
  for (std::size_t it = 0; it < nt; ++it) {
    const std::size_t rt = nt - 1 - it;
    const auto [first, last] = sol.valid_range(it);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t ix = first; ix <= last && first <= last; ++ix) sol.at_node(i, ix, it) = rsol.at_node(i, ix, rt);
  }
  sol.iterations = rsol.iterations;
  sol.final_difference = rsol.final_difference;
  sol.audit_residual = rsol.audit_residual;
  return sol;
}

GronwallReport gronwall_check(const HyperbolicProblem& problem, const SolutionField& solution,
                              double tol) {
  const std::size_t n = problem.size();
  const DeterminacyDomain& dom = problem.domain;
  const Grid2D& grid = solution.grid();
  GronwallReport r;
  for (std::size_t it = 0; it < grid.t.size(); ++it) {
    const auto [first, last] = solution.valid_range(it);
    for (std::size_t ix = first; ix <= last && first <= last; ++ix) {
      const double x = grid.x[ix];
      const double t = grid.t[it];
      double fnorm = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        r.lhs = std::max(r.lhs, std::abs(solution.at_node(i, ix, it)));
        r.sup_g = std::max(r.sup_g, std::abs(problem.g[i](x, t)));
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(problem.f[i][j](x, t));
        fnorm = std::max(fnorm, row);
      }
      r.sup_f = std::max(r.sup_f, fnorm);
    }
  }
  // sup over K_0 on a dense sample plus the solver's own base nodes.
  std::vector<double> base = Grid1D::from_bounds(-dom.kappa, dom.kappa, 2001).points();
  for (std::size_t ix = 0; ix < grid.x.size(); ++ix)
    if (std::abs(grid.x[ix]) <= dom.kappa) base.push_back(grid.x[ix]);
  for (double x : base)
    for (std::size_t i = 0; i < n; ++i) r.sup_u0 = std::max(r.sup_u0, std::abs(problem.u0[i](x, 0.0)));
  r.rhs = (r.sup_u0 + dom.T * r.sup_g) * std::exp(dom.T * r.sup_f);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-9) + 10.0 * tol;
  return r;
}

namespace {

Rect x_domain_of(std::initializer_list<const SmoothField*> fields) {
  Rect r;
  for (const auto* f : fields) {
    r.x_lo = std::max(r.x_lo, f->domain().x_lo);
    r.x_hi = std::min(r.x_hi, f->domain().x_hi);
  }
  return r;
}

}  // namespace

HyperbolicProblem wave_to_system(const WaveEquation& eq, const DeterminacyDomain& domain,
                                 double lambda_floor) {
  domain.validate();
  const SmoothField& lam = eq.lambda;
  const bool lam_t = depends_on_t(lam) && !lam.constant_value();
  const bool lam_x = (lam.dependence() == Dependence::x || lam.dependence() == Dependence::xt) &&
                     !lam.constant_value();
  const bool divide = !eq.k.is_zero() || lam_t;

  if (divide) {
    double inf = std::numeric_limits<double>::infinity();
    const Grid1D xs = Grid1D::from_bounds(-domain.kappa, domain.kappa, 201);
    const Grid1D ts = Grid1D::from_bounds(0.0, domain.T, 101);
    for (std::size_t it = 0; it < ts.size(); ++it)
      for (std::size_t ix = 0; ix < xs.size(); ++ix)
        if (domain.contains(xs[ix], ts[it]) && lam.domain().contains(xs[ix], ts[it]))
          inf = std::min(inf, std::abs(lam(xs[ix], ts[it])));
    if (!(inf >= lambda_floor)) {
      std::ostringstream msg;
      msg << "inf |lambda| = " << inf << " below the invertibility floor " << lambda_floor;
      throw InvertibilityError(msg.str());
    }
  }

  // A = (k/lambda - d_t lambda/lambda - d_x lambda)/2, B the same with + d_t lambda/lambda.
  auto coupling = [&](double tsign) -> SmoothField {
    if (!divide && !lam_x) return SmoothField::constant(0.0);
    const SmoothField k = eq.k;
    const Rect d = lam.domain().intersect(k.domain());
    return SmoothField(
        d,
        [lam, k, divide, lam_t, lam_x, tsign](double x, double t, int, int) {
          double acc = 0.0;
          if (lam_x) acc -= lam.derivative(x, t, 1, 0);
          if (divide) {
            const double l = lam(x, t);
            double num = k(x, t);
            if (lam_t) num += tsign * lam.derivative(x, t, 0, 1);
            acc += num / l;
          }
          return 0.5 * acc;
        },
        Provenance{lam.provenance().eps, lam.provenance().seed, "wave coupling"}, Dependence::xt, 0);
  };
  const SmoothField A = coupling(-1.0);
  const SmoothField B = coupling(+1.0);
  const SmoothField half_h = 0.5 * eq.h;

  HyperbolicProblem p;
  p.domain = domain;
  p.lambda = {lam, -1.0 * lam, SmoothField::constant(0.0)};
  p.f = {{-1.0 * A + half_h, A + half_h, eq.f},
         {-1.0 * B + half_h, B + half_h, eq.f},
         {SmoothField::constant(0.5), SmoothField::constant(0.5), SmoothField::constant(0.0)}};
  p.g = {eq.g, eq.g, SmoothField::constant(0.0)};

  const SmoothField u0 = eq.u0;
  const SmoothField u1 = eq.u1;
  const Rect data_dom = x_domain_of({&u0, &u1, &lam});
  auto data = [&](double sign) {
    return SmoothField(
        data_dom,
        [u0, u1, lam, sign](double x, double, int, int) {
          return u1(x, 0.0) + sign * lam(x, 0.0) * u0.derivative(x, 0.0, 1, 0);
        },
        Provenance{u0.provenance().eps, u0.provenance().seed, "wave data"}, Dependence::x, 0);
  };
  p.u0 = {data(-1.0), data(+1.0), u0};
  p.validate();
  return p;
}

HyperbolicProblem geometric_wave_system(const SmoothField& c_prime, const SmoothField& u0,
                                        const SmoothField& u1, const DeterminacyDomain& domain) {
  const SmoothField lam = combine(
      {c_prime}, [](std::span<const double> v) { return 1.0 / std::sqrt(1.0 + v[0] * v[0]); },
      "geometric speed");
  WaveEquation eq;
  eq.lambda = lam;
  eq.u0 = u0;
  eq.u1 = u1;
  HyperbolicProblem p;
  p.domain = domain;
  p.lambda = {lam, -1.0 * lam, SmoothField::constant(0.0)};
  const SmoothField zero = SmoothField::constant(0.0);
  p.f = {{zero, zero, zero}, {zero, zero, zero}, {SmoothField::constant(0.5), SmoothField::constant(0.5), zero}};
  p.g = {zero, zero, zero};
  const Rect data_dom = x_domain_of({&u0, &u1, &c_prime});
  auto data = [&](double sign) {
    return SmoothField(
        data_dom,
        [u0, u1, lam, sign](double x, double, int, int) {
          return u1(x, 0.0) + sign * lam(x, 0.0) * u0.derivative(x, 0.0, 1, 0);
        },
        Provenance{u0.provenance().eps, u0.provenance().seed, "geometric wave data"}, Dependence::x, 0);
  };
  p.u0 = {data(-1.0), data(+1.0), u0};
  p.validate();
  return p;
}

std::vector<double> integrate_speed(const SmoothField& lambda, const std::vector<double>& times,
                                    double quadrature_step) {
  if (!(quadrature_step > 0.0)) throw ParameterError("quadrature step must be positive");
  std::vector<double> out(times.size());
  double t_prev = 0.0;
  double acc = 0.0;
  auto lam = [&](double s) { return lambda(0.0, s); };
  for (std::size_t m = 0; m < times.size(); ++m) {
    const double span = times[m] - t_prev;
    if (span != 0.0) {
      const auto panels =
          std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(span) / quadrature_step - 1e-9)));
      const double h = span / static_cast<double>(panels);
      double sum = 0.0;
      double left = lam(t_prev);
      for (std::size_t k = 0; k < panels; ++k) {
        const double a = t_prev + static_cast<double>(k) * h;
        const double right = lam(k + 1 == panels ? times[m] : a + h);
        sum += h / 6.0 * (left + 4.0 * lam(a + 0.5 * h) + right);
        left = right;
      }
      acc += sum;
    }
    out[m] = acc;
    t_prev = times[m];
  }
  return out;
}

SolutionField transport_t_only(const SmoothField& lambda, const SmoothField& u0, const Grid2D& grid,
                               double quadrature_step) {
  if (lambda.dependence() == Dependence::x || lambda.dependence() == Dependence::xt)
    throw ParameterError("transport_t_only needs a speed depending on t only");
  const std::vector<double> shift = integrate_speed(lambda, grid.t.points(), quadrature_step);
  const double kappa = std::max(std::abs(grid.x.lower()), std::abs(grid.x.upper()));
  const double T = std::max({std::abs(grid.t.lower()), std::abs(grid.t.upper()), 1e-300});
  SolutionField sol(grid, 1, DeterminacyDomain{kappa, 0.0, T});
  for (std::size_t it = 0; it < grid.t.size(); ++it) {
    sol.set_valid_range(it, 0, grid.x.size() - 1);
    for (std::size_t ix = 0; ix < grid.x.size(); ++ix) {
      const double arg = grid.x[ix] - shift[it];
      if (!u0.domain().contains(arg, 0.0)) {
        std::ostringstream msg;
        msg << "shifted argument " << arg << " outside the data's domain";
        throw DomainError(msg.str());
      }
      sol.at_node(0, ix, it) = u0(arg, 0.0);
    }
  }
  return sol;
}

SolutionField geometric_wave_solve(const ArclengthMap& L, const SmoothField& u0,
                                   const SmoothField& u1, const Grid2D& grid) {
  const double kappa = std::min(-grid.x.lower(), grid.x.upper());
  const double T = grid.t.upper();
  if (grid.t.lower() != 0.0 || !(T > 0.0)) throw ShapeError("geometric wave grid must have t in [0, T]");
  // lambda = (1 + c'^2)^{-1/2} <= 1, so unit slope bounds the domain of determinacy.
  const DeterminacyDomain dom{kappa, 1.0, T};
  dom.validate();
  SolutionField sol(grid, 1, dom);
  const bool has_u1 = !u1.is_zero();
  for (std::size_t it = 0; it < grid.t.size(); ++it) {
    const auto [first, last] = sol.valid_range(it);
    const double t = grid.t[it];
    for (std::size_t ix = first; ix <= last && first <= last; ++ix) {
      const double x = grid.x[ix];
      const double s0 = L(x);
      const double gp = L.inverse(s0 - t);
      const double gm = L.inverse(s0 + t);
      double value = u0(gp, 0.0) + u0(gm, 0.0);
      if (has_u1 && t > 0.0) {
        auto integrand = [&](double s) { return u1(L.inverse(s0 - s), 0.0) + u1(L.inverse(s0 + s), 0.0); };
        value += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 12, 1e-12);
      }
      sol.at_node(0, ix, it) = 0.5 * value;
    }
  }
  return sol;
}

}  // namespace colhyp
