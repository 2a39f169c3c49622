#include "colhyp/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "colhyp/asymptotics.hpp"
#include "colhyp/characteristics.hpp"
#include "colhyp/detail/csv.hpp"
#include "colhyp/embedding.hpp"
#include "colhyp/errors.hpp"
#include "colhyp/fields.hpp"
#include "colhyp/hypsolve.hpp"
#include "colhyp/parallel.hpp"
#include "colhyp/seeding.hpp"

namespace colhyp {

namespace gk = boost::math::quadrature;

// ---------------------------------------------------------------------------------------
// Spec and registry

double ScenarioSpec::param(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw ParameterError("scenario '" + name + "' has no parameter '" + key + "'");
  return it->second;
}

Mollifier ScenarioSpec::mollifier() const {
  return build_mollifier(vanishing_moments, cutoff_inner, cutoff_outer);
}

std::uint64_t ScenarioSpec::seed_for(int purpose, std::uint64_t level, std::uint64_t sample) const {
  return derive_seed(seed ^ hash_tag(name), static_cast<SeedPurpose>(purpose), level, sample);
}

void ScenarioSpec::validate() const {
  ladder.validate();
  if (samples == 0) throw ParameterError("sample count must be positive");
  (void)mollifier();
}

namespace {

struct Entry {
  const char* name;
  const char* description;
  ScenarioReport (*run)(const ScenarioSpec&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"calibration", "constant-coefficient transport and d'Alembert waves against closed forms", run_calibration},
      {"gronwall", "a-priori sup bound on random smooth hyperbolic systems", run_gronwall},
      {"mollifier", "kernel moments, derivative commutation, cut-off independence, polynomial reproduction", run_mollifier},
      {"ogawa", "transport with mollified white noise in time; mean field and heat equation", run_ogawa},
      {"additive_noise_wave", "wave equation forced by mollified space-time white noise", run_additive_noise_wave},
      {"geometric_wave", "wave equation on flat, C1 sine and Brownian curves", run_geometric_wave},
      {"random_speed_wave", "wave equation with mollified bounded C1 random speed vs classical solution", run_random_speed_wave},
      {"classifier", "planted series and counterexample families through the classifier", run_classifier},
      {"transport", "ad-hoc scalar problem u_t + lambda u_x = f u + g with Gaussian data", run_transport},
  };
  return entries;
}

const Entry& lookup(const std::string& name) {
  for (const auto& e : registry())
    if (name == e.name) return e;
  throw ParameterError("unknown scenario '" + name + "'");
}

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.emplace_back(e.name);
  return out;
}

std::string scenario_description(const std::string& name) { return lookup(name).description; }

ScenarioSpec default_spec(const std::string& name) {
  lookup(name);
  ScenarioSpec s;
  s.name = name;
  auto& p = s.params;
  if (name == "calibration") {
    p = {{"kappa", 2.0}, {"T", 1.0}, {"nx", 401}, {"nt", 201}, {"transport_nt", 101},
         {"transport_speed", 1.0}, {"transport_tol", 1e-8}, {"wave_tol", 1e-4}, {"max_seconds", 10.0}};
  } else if (name == "gronwall") {
    p = {{"seeds", 10}, {"draws", 5}, {"kappa", 1.0}, {"T", 0.5}, {"nx", 81}, {"nt", 41}};
  } else if (name == "mollifier") {
    p = {{"eps", 0.05}, {"moment_tol", 1e-10}, {"commute_tol", 1e-6}, {"cutoff_tol", 1e-8},
         {"poly_tol", 1e-9}};
  } else if (name == "ogawa") {
    s.samples = 2000;
    p = {{"eps", 0.01},          {"t_lo", 0.5},         {"t_hi", 1.0},        {"t_step", 0.125},
         {"x_lo", -1.0},         {"x_hi", 1.0},         {"x_step", 0.5},      {"sigma_rel_tol", 0.05},
         {"se_factor", 3.0},     {"series_samples", 100}, {"assoc_min_eps", 0.03}, {"assoc_tol", 1e-2},
         {"max_seconds", 120.0}};
  } else if (name == "additive_noise_wave") {
    s.samples = 10000;
    s.ladder = EpsLadder{0.08, 0.5, 4};
    p = {{"cell", 0.01}, {"se_factor", 5.0}, {"cauchy_samples", 2000}, {"max_seconds", 120.0}};
  } else if (name == "geometric_wave") {
    s.ladder = EpsLadder{0.1, 0.5, 8};
    p = {{"t", 0.5},           {"probe_lo", -1.0},     {"probe_step", 0.5},    {"probes", 5},
         {"sine_amplitude", 0.3}, {"sine_frequency", 2.0}, {"brownian_final_tol", 0.05},
         {"c1_tol", 1e-3},     {"flat_tol", 1e-4},     {"series_samples", 16}, {"max_seconds", 180.0}};
  } else if (name == "random_speed_wave") {
    s.samples = 10;
    p = {{"kappa", 2.0},  {"T", 0.5},          {"c", 2.02},         {"nx", 161},
         {"nt", 41},      {"lambda_lo", 0.5},  {"lambda_hi", 2.0},  {"corr_length", 1.0},
         {"coarse_step", 0.25}, {"tol", 1e-10}, {"error_factor", 2.0}};
  } else if (name == "classifier") {
    p = {{"p_prime", 2.0}, {"omega", 0.3}, {"planted", 5}, {"l1_eps0", 0.25},
         {"exponent_tol", 0.05}, {"log_constant_tol", 0.1}, {"constant_rel_tol", 0.05}};
  } else if (name == "transport") {
    p = {{"lambda", 1.0}, {"f", 0.0},   {"g", 0.0},   {"amplitude", 1.0}, {"center", 0.0},
         {"width", 0.5},  {"kappa", 2.0}, {"T", 1.0}, {"nx", 201},       {"nt", 101},
         {"tol", 1e-10}, {"exact_tol", 1e-4}};
  }
  return s;
}

// ---------------------------------------------------------------------------------------
// Report plumbing

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::format_number(row[i]);
    os << '\n';
  }
}

bool ScenarioReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ScenarioCheck& c) { return c.passed; }) &&
         interchange_violations == 0;
}

const ScenarioCheck* ScenarioReport::find(const std::string& check) const {
  for (const auto& c : checks)
    if (c.name == check) return &c;
  return nullptr;
}

const Table* ScenarioReport::table(const std::string& n) const {
  for (const auto& t : tables)
    if (t.name == n) return &t;
  return nullptr;
}

ScenarioReport run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  ScenarioReport r = lookup(spec.name).run(spec);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (const auto it = spec.params.find("max_seconds"); it != spec.params.end()) {
    std::ostringstream d;
    d << "runtime " << r.seconds << " s, limit " << it->second << " s";
    r.checks.push_back({"runtime", r.seconds < it->second, d.str()});
  }
  return r;
}

namespace {

ScenarioReport begin(const ScenarioSpec& spec) {
  ScenarioReport r;
  r.scenario = spec.name;
  r.spec = spec;
  return r;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void add_check(ScenarioReport& r, std::string name, bool ok, std::string detail) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

std::size_t count_param(const ScenarioSpec& s, const std::string& key) {
  const double v = s.param(key);
  if (!(v >= 1.0) || v != std::floor(v)) throw ParameterError("parameter '" + key + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

void record_series(ScenarioReport& r, const std::string& label, const MeasuredSeries& ms) {
  r.interchange_checks += ms.interchange_checks;
  if (!ms.interchange_holds) ++r.interchange_violations;
  Table t{label + "_series", {"eps", "norm_of_sup", "sup_of_norm"}, {}};
  for (std::size_t k = 0; k < ms.norm_of_sup.eps.size(); ++k)
    t.rows.push_back({ms.norm_of_sup.eps[k], ms.norm_of_sup.values[k], ms.sup_of_norm.values[k]});
  r.tables.push_back(std::move(t));
  const Classification c = classify(ms.norm_of_sup);
  r.verdicts.push_back(label + ": " + c.describe());
}

/// Smooth function of x with derivatives f(x, k).
SmoothField x_function(std::function<double(double, int)> f, std::string source) {
  return SmoothField::of_x(std::move(f), Rect::everywhere(), Provenance{0.0, 0, std::move(source)});
}

/// exp(-a x^2) and its first two derivatives.
double gaussian_bump(double a, double x, int k) {
  const double e = std::exp(-a * x * x);
  switch (k) {
    case 0: return e;
    case 1: return -2.0 * a * x * e;
    case 2: return (4.0 * a * a * x * x - 2.0 * a) * e;
    default: throw ParameterError("gaussian bump derivative order above 2");
  }
}

/// (f * chi rho_eps)(x) by adaptive quadrature over the kernel support.
double mollify_at(const Mollifier& m, double eps, const std::function<double(double)>& f, double x) {
  const double r = m.support_radius(eps);
  return gk::gauss_kronrod<double, 31>::integrate(
      [&](double z) { return f(x - z) * m.kernel(z, eps); }, -r, r, 10, 1e-12);
}

/// (f * N(0, s^2))(x) by adaptive quadrature.
double gaussian_smooth(const std::function<double(double)>& f, double s, double x) {
  const double c = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * s);
  return gk::gauss_kronrod<double, 31>::integrate(
      [&](double y) { return f(x - y) * c * std::exp(-0.5 * y * y / (s * s)); }, -12.0 * s, 12.0 * s,
      12, 1e-13);
}

/// Path grid with step <= step_max containing 0 as a node and covering [lo, hi].
Grid1D origin_grid(double lo, double hi, double step_max) {
  const double n_lo = std::ceil(-lo / step_max);
  const double h = step_max;
  const auto below = static_cast<std::size_t>(std::max(0.0, n_lo));
  const auto above = static_cast<std::size_t>(std::ceil(hi / h));
  return Grid1D(-static_cast<double>(below) * h, h, below + above + 1);
}

}  // namespace

// ---------------------------------------------------------------------------------------
// Reference computations

double sigma_eps_squared(const Mollifier& m, double eps, double t) {
  const double r = m.support_radius(eps);
  auto psi = [](double s, double sp) {
    if (s > 0.0 && sp > 0.0) return std::min(s, sp);
    if (s < 0.0 && sp < 0.0) return std::min(-s, -sp);
    return 0.0;
  };
  auto integrate = [](const std::function<double(double)>& f, double a, double b,
                      std::vector<double> breaks) {
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      const double lo = std::max(a, breaks[k]);
      const double hi = std::min(b, breaks[k + 1]);
      if (hi > lo) acc += gk::gauss_kronrod<double, 31>::integrate(f, lo, hi, 8, 1e-11);
    }
    return acc;
  };
  auto inner = [&](double s) {
    return integrate([&](double sp) { return m.kernel(t - sp, eps) * psi(s, sp); }, t - r, t + r, {0.0, s});
  };
  return integrate([&](double s) { return m.kernel(t - s, eps) * inner(s); }, t - r, t + r, {0.0});
}

namespace {

using Point = std::pair<double, double>;

double shoelace(const std::vector<Point>& poly) {
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& [x1, y1] = poly[i];
    const auto& [x2, y2] = poly[(i + 1) % poly.size()];
    acc += x1 * y2 - x2 * y1;
  }
  return 0.5 * std::abs(acc);
}

/// Sutherland-Hodgman clipping of `subject` by the convex counter-clockwise polygon `clip`.
std::vector<Point> clip_polygon(std::vector<Point> subject, const std::vector<Point>& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Point a = clip[e];
    const Point b = clip[(e + 1) % clip.size()];
    auto side = [&](const Point& p) {
      return (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
    };
    auto cross_point = [&](const Point& p, const Point& q) {
      const double sp = side(p), sq = side(q);
      const double w = sp / (sp - sq);
      return Point{p.first + w * (q.first - p.first), p.second + w * (q.second - p.second)};
    };
    std::vector<Point> out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Point& cur = subject[i];
      const Point& prev = subject[(i + subject.size() - 1) % subject.size()];
      const bool in_cur = side(cur) >= 0.0;
      const bool in_prev = side(prev) >= 0.0;
      if (in_cur) {
        if (!in_prev) out.push_back(cross_point(prev, cur));
        out.push_back(cur);
      } else if (in_prev) {
        out.push_back(cross_point(prev, cur));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

std::vector<Point> cone(double x, double t) { return {{x - t, 0.0}, {x + t, 0.0}, {x, t}}; }

}  // namespace

double cone_intersection_area(double x1, double t1, double x2, double t2) {
  if (t1 <= 0.0 || t2 <= 0.0) return 0.0;
  const auto poly = clip_polygon(cone(x1, t1), cone(x2, t2));
  return poly.size() < 3 ? 0.0 : shoelace(poly);
}

double smoothed_cone_indicator(const Mollifier& m, double eps, double x, double t, double y, double s) {
  const double r = m.support_radius(eps);
  if (s < -r || s > t + r || y < x - t - r || y > x + t + r) return 0.0;
  const double lo = std::max(0.0, s - r);
  const double hi = std::min(t, s + r);
  if (hi <= lo) return 0.0;
  const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / eps - 1e-9));
  const double w = (hi - lo) / static_cast<double>(std::max<std::size_t>(panels, 1));
  double acc = 0.0;
  for (std::size_t k = 0; k < std::max<std::size_t>(panels, 1); ++k) {
    const double a = lo + static_cast<double>(k) * w;
    acc += gk::gauss<double, 10>::integrate(
        [&](double sp) {
          const double slice = m.kernel_cdf(y - x + t - sp, eps) - m.kernel_cdf(y - x - t + sp, eps);
          return m.kernel(s - sp, eps) * slice;
        },
        a, a + w);
  }
  return acc;
}

// ---------------------------------------------------------------------------------------
// Deterministic calibration

ScenarioReport run_calibration(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const double kappa = spec.param("kappa");
  const double T = spec.param("T");
  const Grid1D xs = Grid1D::from_bounds(-kappa, kappa, count_param(spec, "nx"));

  // Transport u_t + a u_x = 0.
  {
    const double a = spec.param("transport_speed");
    const Grid2D grid{xs, Grid1D::from_bounds(0.0, T, count_param(spec, "transport_nt"))};
    auto u0 = [](double x) { return std::exp(-2.0 * x * x) * std::cos(3.0 * x); };
    const DeterminacyDomain dom{kappa, std::abs(a), T};
    const auto problem = HyperbolicProblem::scalar(
        SmoothField::constant(a), SmoothField::constant(0.0), SmoothField::constant(0.0),
        x_function([u0](double x, int) { return u0(x); }, "transport data"), dom);
    SolverOptions opt;
    opt.tol = 1e-12;
    const SolutionField sol = solve_system(problem, grid, opt);
    double err = 0.0;
    for (std::size_t it = 0; it < grid.t.size(); ++it) {
      const auto [first, last] = sol.valid_range(it);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix)
        err = std::max(err, std::abs(sol.at_node(0, ix, it) - u0(grid.x[ix] - a * grid.t[it])));
    }
    add_check(r, "transport_exact", err <= spec.param("transport_tol"),
              "sup error " + num(err) + " on " + std::to_string(grid.x.size()) + "x" +
                  std::to_string(grid.t.size()) + " grid");
    r.tables.push_back({"transport_error", {"speed", "sup_error", "iterations"}, {{a, err, double(sol.iterations)}}});
  }

  // d'Alembert: u_tt = u_xx with (u0, 0) and (0, u1).
  const Grid2D grid{xs, Grid1D::from_bounds(0.0, T, count_param(spec, "nt"))};
  const DeterminacyDomain dom{kappa, 1.0, T};
  Table wave{"dalembert_error", {"case", "sup_error", "iterations"}, {}};
  for (int data_case = 0; data_case < 2; ++data_case) {
    WaveEquation eq;
    const SmoothField bump = x_function([](double x, int k) { return gaussian_bump(2.0, x, k); }, "bump");
    std::function<double(double, double)> exact;
    if (data_case == 0) {
      eq.u0 = bump;
      exact = [](double x, double t) { return 0.5 * (std::exp(-2.0 * (x - t) * (x - t)) + std::exp(-2.0 * (x + t) * (x + t))); };
    } else {
      eq.u1 = bump;
      exact = [](double x, double t) {
        const double s = std::sqrt(2.0);
        return 0.5 * std::sqrt(std::numbers::pi / 8.0) * (std::erf(s * (x + t)) - std::erf(s * (x - t)));
      };
    }
    const HyperbolicProblem problem = wave_to_system(eq, dom);
    SolverOptions opt;
    opt.tol = 1e-11;
    const SolutionField sol = solve_system(problem, grid, opt);
    double err = 0.0;
    for (std::size_t it = 0; it < grid.t.size(); ++it) {
      const auto [first, last] = sol.valid_range(it);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix)
        err = std::max(err, std::abs(sol.at_node(2, ix, it) - exact(grid.x[ix], grid.t[it])));
    }
    const std::string label = data_case == 0 ? "dalembert_u0" : "dalembert_u1";
    add_check(r, label, err <= spec.param("wave_tol"),
              "sup error " + num(err) + " after " + std::to_string(sol.iterations) + " sweeps");
    wave.rows.push_back({double(data_case), err, double(sol.iterations)});
  }
  r.tables.push_back(std::move(wave));
  return r;
}

// ---------------------------------------------------------------------------------------
// Gronwall property suite

namespace {

/// a + b sin(k x + w t + phase), value only.
SmoothField random_wave_field(Rng& rng, double a_max, double b_max, const std::string& source) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = a_max * u(rng), b = b_max * u(rng), k = 3.0 * u(rng), w = 2.0 * u(rng),
               ph = std::numbers::pi * u(rng);
  return SmoothField(
      Rect::everywhere(),
      [a, b, k, w, ph](double x, double t, int dx, int dt) {
        if (dx == 0 && dt == 0) return a + b * std::sin(k * x + w * t + ph);
        // d^dx/dx d^dt/dt of sin(k x + w t + ph)
        const int n = dx + dt;
        const double scale = std::pow(k, dx) * std::pow(w, dt);
        return b * scale * std::sin(k * x + w * t + ph + 0.5 * std::numbers::pi * n);
      },
      Provenance{0.0, 0, source});
}

}  // namespace

ScenarioReport run_gronwall(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const std::size_t seeds = count_param(spec, "seeds");
  const std::size_t draws = count_param(spec, "draws");
  const double kappa = spec.param("kappa");
  const double T = spec.param("T");
  const Grid2D grid{Grid1D::from_bounds(-kappa, kappa, count_param(spec, "nx")),
                    Grid1D::from_bounds(0.0, T, count_param(spec, "nt"))};
  Table t{"gronwall", {"seed", "draw", "lhs", "rhs", "sup_u0", "sup_g", "sup_f", "holds"}, {}};
  std::vector<std::vector<double>> rows(seeds * draws);
  parallel_for(seeds * draws, spec.jobs, [&](std::size_t job) {
    const std::size_t s = job / draws, d = job % draws;
    Rng rng(spec.seed_for(static_cast<int>(SeedPurpose::auxiliary), d, s));
    const std::size_t n = 2;
    HyperbolicProblem p;
    // |lambda| <= 1.5 keeps kappa - c T positive for kappa = 1, T = 0.5.
    for (std::size_t i = 0; i < n; ++i) p.lambda.push_back(random_wave_field(rng, 1.0, 0.5, "lambda"));
    p.f.assign(n, {});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p.f[i].push_back(random_wave_field(rng, 1.0, 0.5, "f"));
    for (std::size_t i = 0; i < n; ++i) p.g.push_back(random_wave_field(rng, 0.5, 0.5, "g"));
    for (std::size_t i = 0; i < n; ++i) p.u0.push_back(random_wave_field(rng, 1.0, 1.0, "u0"));
    p.domain = determinacy_domain(p.lambda, kappa, T);
    SolverOptions opt;
    opt.tol = 1e-10;
    const SolutionField sol = solve_system(p, grid, opt);
    const GronwallReport g = gronwall_check(p, sol, opt.tol);
    rows[job] = {double(s), double(d), g.lhs, g.rhs, g.sup_u0, g.sup_g, g.sup_f, g.holds ? 1.0 : 0.0};
  });
  std::size_t violations = 0;
  for (auto& row : rows) {
    if (row[7] == 0.0) ++violations;
    t.rows.push_back(std::move(row));
  }
  add_check(r, "gronwall_bound", violations == 0,
            std::to_string(violations) + " violations in " + std::to_string(seeds * draws) + " problems");
  r.tables.push_back(std::move(t));
  return r;
}

// ---------------------------------------------------------------------------------------
// Mollifier and embedding suite

ScenarioReport run_mollifier(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const double eps = spec.param("eps");
  const double moment_tol = spec.param("moment_tol");
  Table moments{"moments", {"M", "k", "moment"}, {}};
  bool moments_ok = true;
  double commute_err = 0.0, cutoff_err = 0.0, poly_err = 0.0;
  const std::vector<double> probes = {-0.7, -0.2, 0.0, 0.35, 0.9};
  for (int M : {0, 2, 4, 6}) {
    const Mollifier m = build_mollifier(M, spec.cutoff_inner, spec.cutoff_outer);
    const double R = m.truncation_radius() + 2.0;
    for (int k = 0; k <= M + 2; ++k) {
      const double mk = gk::gauss_kronrod<double, 61>::integrate(
          [&](double u) { return std::pow(u, k) * m.rho(u); }, -R, R, 15, 1e-14);
      moments.rows.push_back({double(M), double(k), mk});
      if (k == 0 && std::abs(mk - 1.0) > moment_tol) moments_ok = false;
      if (k >= 1 && k <= M + 1 && std::abs(mk) > moment_tol) moments_ok = false;
      if (k == M + 2 && std::abs(mk) < 1e-3) moments_ok = false;
    }

    // Embedding of p' against the derivative of the embedding of p.
    const double h = eps / 8.0;
    const Grid1D g = Grid1D::with_max_step(-3.0, 3.0, h);
    auto p0 = [](double x) { return std::sin(2.0 * x) + 0.5 * std::cos(3.0 * x); };
    auto p1 = [](double x) { return 2.0 * std::cos(2.0 * x) - 1.5 * std::sin(3.0 * x); };
    auto p2 = [](double x) { return -4.0 * std::sin(2.0 * x) - 4.5 * std::cos(3.0 * x); };
    const SmoothField e0 = embed_path(sample_function(g, p0, "p"), m, eps);
    const SmoothField e1 = embed_path(sample_function(g, p1, "p'"), m, eps);
    const SmoothField e2 = embed_path(sample_function(g, p2, "p''"), m, eps);
    for (double x : probes) {
      commute_err = std::max(commute_err, std::abs(e0.derivative(x, 0.0, 1, 0) - e1(x, 0.0)));
      commute_err = std::max(commute_err, std::abs(e0.derivative(x, 0.0, 2, 0) - e2(x, 0.0)));
      commute_err = std::max(commute_err, std::abs(e1.derivative(x, 0.0, 1, 0) - e2(x, 0.0)));
    }

    // Different cut-off radii, same kernel support inside the inner radius.
    const Mollifier narrow = build_mollifier(M, 0.5, 1.5);
    if (m.support_radius(eps) < 0.5) {
      const auto path = sample_function(g, p0, "p");
      const SmoothField a = embed_path(path, m, eps);
      const SmoothField b = embed_path(path, narrow, eps);
      for (double x : probes) cutoff_err = std::max(cutoff_err, std::abs(a(x, 0.0) - b(x, 0.0)));
    }

    // Polynomials up to degree M + 1 are reproduced.
    for (int d = 0; d <= M + 1; ++d) {
      const auto path = sample_function(g, [d](double x) { return std::pow(x, d); }, "monomial");
      const SmoothField e = embed_path(path, m, eps);
      for (double x : probes) poly_err = std::max(poly_err, std::abs(e(x, 0.0) - std::pow(x, d)));
    }
  }
  add_check(r, "unit_mass_and_moments", moments_ok, "tolerance " + num(moment_tol));
  add_check(r, "derivative_commutes", commute_err <= spec.param("commute_tol"), "max error " + num(commute_err));
  add_check(r, "cutoff_independence", cutoff_err <= spec.param("cutoff_tol"), "max difference " + num(cutoff_err));
  add_check(r, "polynomial_reproduction", poly_err <= spec.param("poly_tol"), "max error " + num(poly_err));
  r.tables.push_back(std::move(moments));
  r.tables.push_back({"embedding_errors", {"commute", "cutoff", "polynomial"}, {{commute_err, cutoff_err, poly_err}}});
  return r;
}

// ---------------------------------------------------------------------------------------
// Ad-hoc transport solve

ScenarioReport run_transport(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const double a = spec.param("lambda"), f = spec.param("f"), g = spec.param("g");
  const double amp = spec.param("amplitude"), x0 = spec.param("center"), w = spec.param("width");
  const double kappa = spec.param("kappa"), T = spec.param("T");
  const DeterminacyDomain dom{kappa, std::abs(a), std::abs(T)};
  dom.validate();
  const Grid1D ts = T > 0 ? Grid1D::from_bounds(0.0, T, count_param(spec, "nt"))
                          : Grid1D::from_bounds(T, 0.0, count_param(spec, "nt"));
  const Grid2D grid{Grid1D::from_bounds(-kappa, kappa, count_param(spec, "nx")), ts};
  auto u0 = [=](double x) { return amp * std::exp(-(x - x0) * (x - x0) / (w * w)); };
  const auto problem = HyperbolicProblem::scalar(
      SmoothField::constant(a), SmoothField::constant(f), SmoothField::constant(g),
      x_function([u0](double x, int) { return u0(x); }, "gaussian data"), dom);
  SolverOptions opt;
  opt.tol = spec.param("tol");
  const SolutionField sol = solve_system(problem, grid, opt);
  const GronwallReport gr = gronwall_check(problem, sol, opt.tol);
  add_check(r, "gronwall_bound", gr.holds, "sup |u| " + num(gr.lhs) + " <= " + num(gr.rhs));
  // Exact solution along straight characteristics: e^{f t} u0(x - a t) + g (e^{f t} - 1)/f.
  double err = 0.0;
  Table t{"solution", {"x", "t", "u", "exact"}, {}};
  for (std::size_t it = 0; it < grid.t.size(); ++it) {
    const auto [first, last] = sol.valid_range(it);
    for (std::size_t ix = first; ix <= last && first <= last; ++ix) {
      const double x = grid.x[ix], tt = grid.t[it];
      const double growth = std::exp(f * tt);
      const double forced = f == 0.0 ? g * tt : g * (growth - 1.0) / f;
      const double exact = growth * u0(x - a * tt) + forced;
      err = std::max(err, std::abs(sol.at_node(0, ix, it) - exact));
      t.rows.push_back({x, tt, sol.at_node(0, ix, it), exact});
    }
  }
  add_check(r, "exact_solution", err <= spec.param("exact_tol"), "sup error " + num(err));
  r.tables.push_back(std::move(t));
  return r;
}


// ---------------------------------------------------------------------------------------
// Transport with white noise in time

namespace {

/// Bump exp(-1 / (1 - u^2)), u = (x - c) / w, supported in [c - w, c + w].
TestFunction bump_test(double c, double w) {
  return TestFunction{[c, w](double x) {
                        const double u = (x - c) / w;
                        return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
                      },
                      c - w, c + w, "bump(" + num(c) + ")"};
}

}  // namespace

ScenarioReport run_ogawa(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const Mollifier m = spec.mollifier();
  const double eps = spec.param("eps");
  const double t_lo = spec.param("t_lo"), t_hi = spec.param("t_hi"), t_step = spec.param("t_step");
  const double x_lo = spec.param("x_lo"), x_hi = spec.param("x_hi"), x_step = spec.param("x_step");
  if (!(t_lo > 0.0) || t_hi < t_lo) throw ParameterError("ogawa needs 0 < t_lo <= t_hi");
  auto u0 = [](double x) { return std::exp(-x * x); };

  const Grid1D pt(0.0, t_step, static_cast<std::size_t>(std::llround(t_hi / t_step)) + 1);
  const Grid1D px(x_lo, x_step, static_cast<std::size_t>(std::llround((x_hi - x_lo) / x_step)) + 1);
  const Grid2D pgrid{px, pt};
  std::vector<std::size_t> probe_levels;
  for (std::size_t it = 0; it < pt.size(); ++it)
    if (pt[it] >= t_lo - 1e-12) probe_levels.push_back(it);

  // Variance of the mollified Brownian motion by double quadrature.
  std::vector<double> sigma2(pt.size(), 0.0);
  double worst_rel = 0.0;
  for (std::size_t it : probe_levels) {
    sigma2[it] = sigma_eps_squared(m, eps, pt[it]);
    worst_rel = std::max(worst_rel, std::abs(sigma2[it] - pt[it]) / pt[it]);
  }
  add_check(r, "sigma_eps_squared", worst_rel <= spec.param("sigma_rel_tol"),
            "max relative deviation from t: " + num(worst_rel));

  // Mollified data and Brownian paths.
  // The Gaussian reference integrates u0_eps over 12 standard deviations around each probe.
  const double data_half = std::max(std::abs(x_lo), std::abs(x_hi)) + 12.0 * std::sqrt(2.0 * t_hi) + 1.0;
  const SmoothField u0e =
      embed_path(sample_function(Grid1D::with_max_step(-data_half, data_half, eps / 8.0), u0, "u0"), m, eps);
  const double rad = m.support_radius(eps);
  const Grid1D wgrid = origin_grid(-rad - eps, t_hi + rad + eps, eps / 8.0);
  auto brownian = [&](std::size_t s) {
    return sample_brownian_1d(wgrid, spec.seed_for(static_cast<int>(SeedPurpose::path), 0, s));
  };
  const SolutionFactory solution = [&](std::size_t s) {
    const SampledProcess W = brownian(s);
    const SmoothField We = embed_path(W, m, eps, Axis::t);
    const SmoothField dW = embed_derivative(W, m, eps, 1, Axis::t);
    // Shifted data so that u_eps = u0_eps(x - W_eps(t)) including the offset W_eps(0).
    const double w0 = We(0.0, 0.0);
    Rect d = u0e.domain();
    d.x_lo += w0;
    d.x_hi += w0;
    const SmoothField data = SmoothField::of_x(
        [u0e, w0](double x, int k) { return u0e.derivative(x - w0, 0.0, k, 0); }, d,
        Provenance{eps, W.seed, "shifted data"});
    return transport_t_only(dW, data, pgrid, eps / 8.0);
  };
  const std::size_t n = spec.samples;
  const MomentField mean = moment_field(solution, 0, 1, pgrid, n, spec.jobs);

  // Monte Carlo variance of W_eps(t) on the same paths.
  const MomentEstimate var = sample_moments(
      [&](std::size_t s) {
        const SmoothField We = embed_path(brownian(s), m, eps, Axis::t);
        std::vector<double> v;
        for (std::size_t it : probe_levels) v.push_back(We(0.0, pt[it]));
        return v;
      },
      2, n, spec.jobs);
  Table st{"sigma", {"t", "quadrature", "monte_carlo", "standard_error"}, {}};
  bool var_ok = true;
  for (std::size_t k = 0; k < probe_levels.size(); ++k) {
    const std::size_t it = probe_levels[k];
    st.rows.push_back({pt[it], sigma2[it], var.mean[k], var.standard_error[k]});
    if (std::abs(var.mean[k] - sigma2[it]) > 5.0 * var.standard_error[k]) var_ok = false;
  }
  add_check(r, "sigma_monte_carlo", var_ok, "Monte Carlo E W_eps(t)^2 within 5 SE of quadrature");
  r.tables.push_back(std::move(st));

  // Mean field against u0_eps * p_eps and the heat solution u0 * p.
  const double factor = spec.param("se_factor");
  auto u0e_fn = [&](double x) { return u0e(x, 0.0); };
  auto heat = [&](double x, double t) { return gaussian_smooth(u0, std::sqrt(t), x); };
  Table mt{"mean_field", {"x", "t", "mean", "standard_error", "reference", "heat", "gap_over_se"}, {}};
  bool mean_ok = true;
  double worst = 0.0;
  for (std::size_t it : probe_levels)
    for (std::size_t ix = 0; ix < px.size(); ++ix) {
      const double ref = gaussian_smooth(u0e_fn, std::sqrt(sigma2[it]), px[ix]);
      const double mu = mean.mean_at(ix, it), se = mean.se_at(ix, it);
      const double z = std::abs(mu - ref) / se;
      worst = std::max(worst, z);
      if (!(std::abs(mu - ref) <= factor * se)) mean_ok = false;
      mt.rows.push_back({px[ix], pt[it], mu, se, ref, heat(px[ix], pt[it]), z});
    }
  add_check(r, "mean_vs_gaussian_smoothing", mean_ok,
            std::to_string(mt.rows.size()) + " probes, worst gap " + num(worst) + " SE (limit " + num(factor) + ")");
  r.tables.push_back(std::move(mt));

  // Heat equation residual of the limit reference by centred differences.
  {
    const double ht = 1e-3, hx = 1e-2, delta = 1e-11;
    Table ht_tab{"heat_residual", {"x", "t", "residual", "bound"}, {}};
    bool ok = true;
    for (std::size_t it : probe_levels)
      for (std::size_t ix = 0; ix < px.size(); ++ix) {
        const double x = px[ix], t = pt[it];
        const double c = heat(x, t);
        const double dt = (heat(x, t + ht) - heat(x, t - ht)) / (2.0 * ht);
        const double dxx = (heat(x + hx, t) - 2.0 * c + heat(x - hx, t)) / (hx * hx);
        const double res = std::abs(dt - 0.5 * dxx);
        // Truncation terms from sup |d_x^6| and sup |d_x^4| of a Gaussian of variance 1/2 + t,
        // plus the amplified quadrature error.
        const double var = 0.5 + t - ht;
        const double umax = 1.0 / std::sqrt(1.0 + 2.0 * (t - ht));
        const double bound = ht * ht / 6.0 * (15.0 / 8.0) * umax / std::pow(var, 3) +
                             0.5 * hx * hx / 12.0 * 3.0 * umax / (var * var) + delta / ht + 2.0 * delta / (hx * hx);
        if (!(res <= bound)) ok = false;
        ht_tab.rows.push_back({x, t, res, bound});
      }
    add_check(r, "heat_residual", ok, "centred differences within truncation bound");
    r.tables.push_back(std::move(ht_tab));
  }

  // Association of the mean field with the heat solution along the ladder.
  {
    std::vector<double> levels;
    // Levels where the cut-off is inactive on the kernel support; above them the truncated
    // kernel loses mass and the gap is not yet in its asymptotic regime.
    for (double e : spec.ladder.values())
      if (e >= spec.param("assoc_min_eps") && m.support_radius(e) <= m.cutoff_inner()) levels.push_back(e);
    const double t = t_hi;
    const FieldFactory mean_field = [&](double e, std::size_t) {
      const double s = std::sqrt(sigma_eps_squared(m, e, t));
      return SmoothField::of_x(
          [&m, e, s, u0](double x, int) {
            return gaussian_smooth([&](double y) { return mollify_at(m, e, u0, y); }, s, x);
          },
          Rect::x_interval(-3.0, 3.0), Provenance{e, 0, "mean field"}, 0);
    };
    const std::vector<TestFunction> tests = {bump_test(-0.5, 0.5), bump_test(0.0, 0.5), bump_test(0.5, 0.5)};
    const AssociationReport a = association_check(
        mean_field, function_reference([&](double x) { return heat(x, t); }), tests, levels, 1,
        spec.param("assoc_tol"), spec.jobs);
    Table at{"association", {"eps", "gap_left", "gap_centre", "gap_right"}, {}};
    for (std::size_t k = 0; k < levels.size(); ++k) at.rows.push_back({levels[k], a.gaps[k][0], a.gaps[k][1], a.gaps[k][2]});
    r.tables.push_back(std::move(at));
    add_check(r, "association_decreasing", a.decreasing && levels.size() >= 2,
              "mean field vs heat solution at t = " + num(t) + ", final gaps below " +
                  num(spec.param("assoc_tol")) + ": " + (a.below_tolerance ? "yes" : "no"));
  }

  // Growth of the mollified noise and of its time integral along the ladder.
  {
    const std::vector<double> ladder = spec.ladder.values();
    const double e_min = ladder.back();
    const double r_max = m.support_radius(ladder.front());
    const Grid1D g = origin_grid(t_lo - r_max - e_min, t_hi + r_max + e_min, e_min / 8.0);
    NormDescriptor d;
    d.K = Rect::t_interval(t_lo, t_hi);
    d.p = 2;
    d.samples = count_param(spec, "series_samples");
    d.quantity = "sup |dW_eps/dt|";
    const FieldFactory noise = [&](double e, std::size_t s) {
      return embed_derivative(sample_brownian_1d(g, spec.seed_for(static_cast<int>(SeedPurpose::path), 1, s)), m, e, 1, Axis::t);
    };
    record_series(r, "white_noise", measure_series(noise, d, ladder, {}, spec.jobs));
    d.quantity = "sup |W_eps(t) - W_eps(t_lo)|";
    d.time_l1 = true;
    const FieldFactory integral = [&](double e, std::size_t s) {
      const SmoothField We = embed_path(sample_brownian_1d(g, spec.seed_for(static_cast<int>(SeedPurpose::path), 1, s)), m, e, Axis::t);
      const double base = We(0.0, t_lo);
      return SmoothField::of_t([We, base](double t, int k) { return We.derivative(0.0, t, 0, k) - (k == 0 ? base : 0.0); },
                               We.domain(), We.provenance());
    };
    record_series(r, "noise_integral", measure_series(integral, d, ladder, {}, spec.jobs));
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// Wave equation with additive space-time white noise

ScenarioReport run_additive_noise_wave(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const Mollifier m = spec.mollifier();
  const std::vector<double> ladder = spec.ladder.values();
  const double eps = ladder.back();
  const double cell = spec.param("cell");
  const double factor = spec.param("se_factor");

  struct Probe {
    double x, t;
  };
  const std::vector<Probe> points = {{0.0, 1.0}, {0.5, 1.0}, {-0.25, 0.5}, {2.5, 1.0}};
  const Probe cauchy_point = points[0];

  // Noise cells covering every smoothed cone.
  const double reach = m.support_radius(ladder.front()) + cell;
  double x_lo = 1e300, x_hi = -1e300, t_hi = 0.0;
  for (const auto& p : points) {
    x_lo = std::min(x_lo, p.x - p.t);
    x_hi = std::max(x_hi, p.x + p.t);
    t_hi = std::max(t_hi, p.t);
  }
  const Grid2D cells{Grid1D::with_max_step(x_lo - reach, x_hi + reach, cell),
                     Grid1D::with_max_step(-reach, t_hi + reach, cell)};
  const WhiteNoiseField layout{cells.x, cells.t, {}, 0};

  // Test functions 1/2 (1_Gamma * k_eps) on the cells: the probes at the finest eps, then the
  // Cauchy ladder at the first probe.
  std::vector<std::vector<double>> phis;
  std::vector<std::pair<double, Probe>> specs;
  for (const auto& p : points) specs.push_back({eps, p});
  for (double e : ladder) specs.push_back({e, cauchy_point});
  phis.resize(specs.size());
  parallel_for(specs.size(), spec.jobs, [&](std::size_t k) {
    const auto [e, p] = specs[k];
    phis[k] = tabulate_on_cells(layout, [&, e = e, p = p](double y, double s) {
      return 0.5 * smoothed_cone_indicator(m, e, p.x, p.t, y, s);
    });
  });

  const std::size_t n = spec.samples;
  const std::size_t n_cauchy = std::min<std::size_t>(n, count_param(spec, "cauchy_samples"));
  // Cell increments are independent, so only cells inside the support of a sample's test
  // functions are drawn: all of them for the Cauchy samples, the probes' alone otherwise.
  struct Support {
    std::size_t count;
    std::vector<std::size_t> cells;
    std::vector<std::vector<double>> phi;
  };
  auto support = [&](std::size_t count) {
    Support sp{count, {}, std::vector<std::vector<double>>(count)};
    for (std::size_t c = 0; c < layout.cell_count(); ++c) {
      bool active = false;
      for (std::size_t k = 0; k < count; ++k) active = active || phis[k][c] != 0.0;
      if (!active) continue;
      sp.cells.push_back(c);
      for (std::size_t k = 0; k < count; ++k) sp.phi[k].push_back(phis[k][c]);
    }
    return sp;
  };
  const Support wide = support(phis.size()), narrow = support(points.size());
  const double sd = std::sqrt(layout.cell_measure());
  std::vector<std::vector<double>> values(n);
  parallel_for(n, spec.jobs, [&](std::size_t s) {
    const Support& sp = s < n_cauchy ? wide : narrow;
    Rng rng(spec.seed_for(static_cast<int>(SeedPurpose::noise), 0, s));
    std::normal_distribution<double> normal(0.0, sd);
    values[s].assign(sp.count, 0.0);
    for (std::size_t c = 0; c < sp.cells.size(); ++c) {
      const double dw = normal(rng);
      for (std::size_t k = 0; k < sp.count; ++k) values[s][k] += sp.phi[k][c] * dw;
    }
  });

  const CovarianceEstimate cov = autocovariance(
      [&](std::size_t s) { return std::vector<double>(values[s].begin(), values[s].begin() + points.size()); }, n,
      spec.jobs);
  Table ct{"covariance", {"x1", "t1", "x2", "t2", "estimate", "standard_error", "reference", "discrete"}, {}};
  auto discrete = [&](std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t c = 0; c < phis[a].size(); ++c) acc += phis[a][c] * phis[b][c];
    return acc * layout.cell_measure();
  };
  auto pair_check = [&](const std::string& name, std::size_t a, std::size_t b) {
    const double ref = 0.25 * cone_intersection_area(points[a].x, points[a].t, points[b].x, points[b].t);
    const double est = cov.cov(a, b), se = cov.se(a, b);
    ct.rows.push_back({points[a].x, points[a].t, points[b].x, points[b].t, est, se, ref, discrete(a, b)});
    add_check(r, name, std::abs(est - ref) <= factor * se,
              "estimate " + num(est) + " vs " + num(ref) + " (SE " + num(se) + ")");
  };
  pair_check("variance", 0, 0);
  pair_check("covariance_overlap_a", 0, 1);
  pair_check("covariance_overlap_b", 0, 2);
  pair_check("covariance_overlap_c", 1, 2);
  pair_check("covariance_disjoint", 0, 3);
  r.tables.push_back(std::move(ct));

  // L^2 Cauchy behaviour: E (u_{eps_k} - u_{eps_k+1})^2 along the ladder.
  {
    const std::size_t first = points.size();
    Table lt{"cauchy", {"eps", "eps_next", "mean_square_difference", "standard_error", "discrete"}, {}};
    const MomentEstimate d2 = sample_moments(
        [&](std::size_t s) {
          std::vector<double> v;
          for (std::size_t k = 0; k + 1 < ladder.size(); ++k) v.push_back(values[s][first + k] - values[s][first + k + 1]);
          return v;
        },
        2, n_cauchy, spec.jobs);
    bool decreasing = true;
    for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
      const std::size_t a = first + k, b = first + k + 1;
      double exact = 0.0;
      for (std::size_t c = 0; c < phis[a].size(); ++c) exact += (phis[a][c] - phis[b][c]) * (phis[a][c] - phis[b][c]);
      exact *= layout.cell_measure();
      lt.rows.push_back({ladder[k], ladder[k + 1], d2.mean[k], d2.standard_error[k], exact});
      if (k > 0 && !(d2.mean[k] < d2.mean[k - 1])) decreasing = false;
    }
    add_check(r, "l2_cauchy", decreasing, "successive mean-square differences decrease along the ladder");
    r.tables.push_back(std::move(lt));
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// Geometric wave equation

ScenarioReport run_geometric_wave(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const Mollifier m = spec.mollifier();
  const std::vector<double> ladder = spec.ladder.values();
  const double t = spec.param("t");
  std::vector<double> probes;
  for (std::size_t k = 0; k < count_param(spec, "probes"); ++k)
    probes.push_back(spec.param("probe_lo") + static_cast<double>(k) * spec.param("probe_step"));
  const double p_lo = *std::min_element(probes.begin(), probes.end());
  const double p_hi = *std::max_element(probes.begin(), probes.end());
  // Arclength tables cover every characteristic foot; the path covers the kernel support too.
  const double table_lo = p_lo - t - 0.1, table_hi = p_hi + t + 0.1;
  const double e_min = ladder.back();
  const double path_reach = m.support_radius(ladder.front()) + 0.1;
  const Grid1D path_grid = origin_grid(table_lo - path_reach, table_hi + path_reach, e_min / 8.0);
  auto table_grid = [&](double e) { return origin_grid(table_lo, table_hi, std::min(e / 4.0, 0.01)); };
  auto u0 = [](double x) { return std::exp(-x * x); };

  // Flat curve: unit speed, d'Alembert with both data.
  {
    const double half = std::max(std::abs(p_lo), std::abs(p_hi)) + t;
    const Grid2D grid{Grid1D::from_bounds(-half, half, 121), Grid1D::from_bounds(0.0, t, 11)};
    const ArclengthMap L(SmoothField::constant(0.0), origin_grid(-half - 0.1, half + 0.1, 0.01));
    const SmoothField d0 = x_function([](double x, int k) { return gaussian_bump(1.0, x, k); }, "u0");
    const SmoothField d1 = x_function([](double x, int) { return x * std::exp(-x * x); }, "u1");
    const SolutionField sol = geometric_wave_solve(L, d0, d1, grid);
    double err = 0.0;
    for (std::size_t it = 0; it < grid.t.size(); ++it) {
      const auto [first, last] = sol.valid_range(it);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix) {
        const double x = grid.x[ix], s = grid.t[it];
        const double exact = 0.5 * (u0(x - s) + u0(x + s)) - 0.25 * (u0(x + s) - u0(x - s));
        err = std::max(err, std::abs(sol.at_node(0, ix, it) - exact));
      }
    }
    add_check(r, "flat_dalembert", err <= spec.param("flat_tol"), "sup error " + num(err));
  }

  // C^1 sine curve: mollified characteristics against the unmollified arclength.
  {
    const double A = spec.param("sine_amplitude"), w = spec.param("sine_frequency");
    const SampledProcess c = sample_function(path_grid, [A, w](double x) { return A * std::sin(w * x); }, "sine");
    const SmoothField c_prime = x_function(
        [A, w](double x, int k) {
          return A * std::pow(w, k + 1) * std::cos(w * x + 0.5 * std::numbers::pi * k);
        },
        "sine'");
    const ArclengthMap L(c_prime, origin_grid(table_lo, table_hi, 1e-4));
    Table tab{"c1_characteristics", {"eps", "max_gap"}, {}};
    double final_gap = 0.0;
    for (double e : ladder) {
      const ArclengthMap Le(embed_derivative(c, m, e, 1), table_grid(e));
      double gap = 0.0;
      for (double x : probes) {
        const auto [gp, gm] = arclength_characteristics(Le, x, t);
        const auto [rp, rm] = arclength_characteristics(L, x, t);
        gap = std::max({gap, std::abs(gp - rp), std::abs(gm - rm)});
      }
      tab.rows.push_back({e, gap});
      final_gap = gap;
    }
    add_check(r, "c1_characteristics", final_gap <= spec.param("c1_tol"),
              "finest-level gap " + num(final_gap));
    r.tables.push_back(std::move(tab));
  }

  // Brownian curve: characteristics collapse onto x and waves stop propagating.
  {
    const SampledProcess X = sample_brownian_1d(path_grid, spec.seed_for(static_cast<int>(SeedPurpose::path), 0, 0));
    std::vector<std::string> cols = {"eps"};
    for (std::size_t k = 0; k < probes.size(); ++k) cols.push_back("shift_" + std::to_string(k));
    Table shifts{"brownian_characteristics", cols, {}};
    cols[0] = "eps";
    for (std::size_t k = 0; k < probes.size(); ++k) cols[k + 1] = "gap_" + std::to_string(k);
    Table gaps{"brownian_solution", cols, {}};
    std::vector<std::vector<double>> shift(ladder.size()), gap(ladder.size());
    parallel_for(ladder.size(), spec.jobs, [&](std::size_t k) {
      const double e = ladder[k];
      const ArclengthMap Le(embed_derivative(X, m, e, 1), table_grid(e));
      const SmoothField u0e = embed_path(sample_function(Grid1D::with_max_step(-4.0, 4.0, e / 8.0), u0, "u0"), m, e);
      const double half = std::max(std::abs(p_lo), std::abs(p_hi)) + t;
      const double step = spec.param("probe_step");
      const auto nx = static_cast<std::size_t>(std::llround(2.0 * half / step)) + 1;
      const Grid2D grid{Grid1D(-half, step, nx), Grid1D(0.0, t, 2)};
      const SolutionField sol = geometric_wave_solve(Le, u0e, SmoothField::constant(0.0), grid);
      for (double x : probes) {
        shift[k].push_back(std::abs(arclength_characteristics(Le, x, t).first - x));
        gap[k].push_back(std::abs(sol(0, x, t) - u0(x)));
      }
    });
    bool strictly = true;
    double final_shift = 0.0;
    bool solution_closer = true;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      std::vector<double> row = {ladder[k]};
      row.insert(row.end(), shift[k].begin(), shift[k].end());
      shifts.rows.push_back(row);
      row = {ladder[k]};
      row.insert(row.end(), gap[k].begin(), gap[k].end());
      gaps.rows.push_back(row);
      for (std::size_t j = 0; j < probes.size(); ++j) {
        if (k > 0 && !(shift[k][j] < shift[k - 1][j])) strictly = false;
        if (k + 1 == ladder.size()) {
          final_shift = std::max(final_shift, shift[k][j]);
          if (!(gap[k][j] < gap[0][j])) solution_closer = false;
        }
      }
    }
    add_check(r, "brownian_shift_decreasing", strictly, "|gamma+ - x| strictly decreasing at every probe");
    add_check(r, "brownian_shift_final", final_shift <= spec.param("brownian_final_tol"),
              "finest-level max shift " + num(final_shift));
    add_check(r, "brownian_solution_approaches_data", solution_closer,
              "|u_eps - u0| at the finest level below the coarsest at every probe");
    r.tables.push_back(std::move(shifts));
    r.tables.push_back(std::move(gaps));

    // Roughness of the mollified curve slope along the ladder.
    NormDescriptor d;
    d.quantity = "sup |c_eps'|";
    d.K = Rect::x_interval(-0.25, 0.25);
    d.p = 2;
    d.samples = count_param(spec, "series_samples");
    const FieldFactory slope = [&](double e, std::size_t s) {
      return embed_derivative(sample_brownian_1d(path_grid, spec.seed_for(static_cast<int>(SeedPurpose::path), 1, s)), m, e, 1);
    };
    record_series(r, "curve_slope", measure_series(slope, d, ladder, {}, spec.jobs));
  }
  return r;
}

// ---------------------------------------------------------------------------------------
// Wave equation with a random speed

namespace {

/// lambda(x) = lo + (hi - lo) Phi(X(x)) for the C^2 spline X through a Gaussian path, with
/// derivatives up to order 2.
SmoothField translated_speed(const SmoothField& X, double lo, double hi, std::uint64_t seed) {
  return SmoothField::of_x(
      [X, lo, hi](double x, int k) {
        const double v = X(x, 0.0);
        const double dens = std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
        switch (k) {
          case 0: return lo + (hi - lo) * normal_cdf(v);
          case 1: return (hi - lo) * dens * X.derivative(x, 0.0, 1, 0);
          case 2: {
            const double d1 = X.derivative(x, 0.0, 1, 0);
            return (hi - lo) * dens * (X.derivative(x, 0.0, 2, 0) - v * d1 * d1);
          }
          default: throw ParameterError("translated speed has derivatives up to order 2");
        }
      },
      X.domain(), Provenance{0.0, seed, "translated speed"}, 2);
}

}  // namespace

ScenarioReport run_random_speed_wave(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const Mollifier m = spec.mollifier();
  const std::vector<double> ladder = spec.ladder.values();
  const double kappa = spec.param("kappa"), T = spec.param("T");
  const DeterminacyDomain dom{kappa, spec.param("c"), T};
  dom.validate();
  const double lo = spec.param("lambda_lo"), hi = spec.param("lambda_hi");
  if (!(lo > 0.0) || hi < lo || hi > dom.c) throw ParameterError("speed range must lie in (0, c]");
  const std::size_t nx = count_param(spec, "nx"), nt = count_param(spec, "nt");
  const Grid2D grid{Grid1D::from_bounds(-kappa, kappa, nx), Grid1D::from_bounds(0.0, T, nt)};
  const Grid2D fine{Grid1D::from_bounds(-kappa, kappa, 2 * nx - 1), Grid1D::from_bounds(0.0, T, 2 * nt - 1)};
  SolverOptions opt;
  opt.tol = spec.param("tol");

  const SmoothField u0 = x_function([](double x, int k) { return gaussian_bump(4.0, x, k); }, "u0");
  const double reach = m.support_radius(ladder.front()) + 0.25;
  const Grid1D coarse = Grid1D::with_max_step(-kappa - reach - 1.0, kappa + reach + 1.0, spec.param("coarse_step"));
  const GaussianFieldSampler sampler(coarse, CovarianceKernel::exponential(1.0, spec.param("corr_length")));

  const std::size_t seeds = spec.samples;
  std::vector<SmoothField> speeds;
  for (std::size_t s = 0; s < seeds; ++s) {
    const SampledProcess X = sampler.sample(spec.seed_for(static_cast<int>(SeedPurpose::path), 0, s));
    speeds.push_back(translated_speed(spline_field(X), lo, hi, X.seed));
  }
  // lambda_eps: mollified speed, tabulated with its first derivative for the solver.
  auto mollified_speed = [&](std::size_t s, double e) {
    const double rad = m.support_radius(e);
    const double half = kappa + 0.05;
    const Grid1D g = Grid1D::with_max_step(-half - rad - 0.01, half + rad + 0.01, e / 8.0);
    const SmoothField lam = speeds[s];
    const SmoothField emb = embed_path(sample_function(g, [lam](double x) { return lam(x, 0.0); }, "speed"), m, e);
    return tabulate_field(emb, Grid1D::with_max_step(-half, half, std::min(e / 4.0, 0.0125)), Axis::x, 1);
  };
  auto solve = [&](const SmoothField& lam, const Grid2D& g) {
    WaveEquation eq;
    eq.lambda = lam;
    eq.u0 = u0;
    return solve_system(wave_to_system(eq, dom), g, opt);
  };
  auto sup_gap = [&](const SolutionField& a, const SolutionField& b, std::size_t stride) {
    double gap = 0.0;
    for (std::size_t it = 0; it < a.grid().t.size(); ++it) {
      const auto [first, last] = a.valid_range(it);
      for (std::size_t ix = first; ix <= last && first <= last; ++ix)
        gap = std::max(gap, std::abs(a.at_node(2, ix, it) - b.at_node(2, ix * stride, it * stride)));
    }
    return gap;
  };

  std::vector<std::vector<double>> gaps(seeds, std::vector<double>(ladder.size()));
  std::vector<double> disc(seeds);
  parallel_for(seeds * (ladder.size() + 1), spec.jobs, [&](std::size_t job) {
    const std::size_t s = job / (ladder.size() + 1), k = job % (ladder.size() + 1);
    if (k == 0) {
      const SmoothField lam = tabulate_field(speeds[s], Grid1D::with_max_step(-kappa - 0.05, kappa + 0.05, 0.005), Axis::x, 1);
      disc[s] = sup_gap(solve(lam, grid), solve(lam, fine), 2);
      return;
    }
    const SolutionField ref = solve(speeds[s], grid);
    gaps[s][k - 1] = sup_gap(solve(mollified_speed(s, ladder[k - 1]), grid), ref, 1);
  });

  std::vector<std::string> cols = {"seed", "discretization_error"};
  for (std::size_t k = 0; k < ladder.size(); ++k) cols.push_back("gap_" + std::to_string(k));
  Table t{"consistency", cols, {}};
  std::size_t decreasing = 0, within = 0;
  for (std::size_t s = 0; s < seeds; ++s) {
    std::vector<double> row = {double(s), disc[s]};
    row.insert(row.end(), gaps[s].begin(), gaps[s].end());
    t.rows.push_back(row);
    bool dec = true;
    for (std::size_t k = 1; k < ladder.size(); ++k)
      if (!(gaps[s][k] < gaps[s][k - 1])) dec = false;
    decreasing += dec ? 1 : 0;
    within += gaps[s].back() <= spec.param("error_factor") * disc[s] ? 1 : 0;
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back({"ladder", {"eps"}, {}});
  for (double e : ladder) r.tables.back().rows.push_back({e});
  add_check(r, "gap_decreasing", decreasing == seeds,
            std::to_string(decreasing) + "/" + std::to_string(seeds) + " seeds decrease along the ladder");
  add_check(r, "final_gap_within_discretization", within == seeds,
            std::to_string(within) + "/" + std::to_string(seeds) + " seeds end within " +
                num(spec.param("error_factor")) + "x the fine-grid error estimate");

  // Slope of the mollified speed: bounded for a C^1 speed.
  NormDescriptor d;
  d.quantity = "sup |lambda_eps'|";
  d.K = Rect::x_interval(-1.0, 1.0);
  d.alpha = 1;
  d.p = 2;
  d.samples = seeds;
  const FieldFactory slope = [&](double e, std::size_t s) {
    const double rad = m.support_radius(e);
    const Grid1D g = Grid1D::with_max_step(-1.1 - rad, 1.1 + rad, e / 8.0);
    const SmoothField lam = speeds[s];
    return embed_path(sample_function(g, [lam](double x) { return lam(x, 0.0); }, "speed"), m, e);
  };
  record_series(r, "speed_slope", measure_series(slope, d, ladder, {}, spec.jobs));
  return r;
}

// ---------------------------------------------------------------------------------------
// Classifier

namespace {

EpsSeries planted(const std::vector<double>& eps, const std::function<double(double)>& f, std::string q) {
  EpsSeries s;
  s.eps = eps;
  for (double e : eps) s.values.push_back(f(e));
  s.descriptor.quantity = std::move(q);
  return s;
}

void series_table(ScenarioReport& r, const std::string& name, const EpsSeries& s) {
  Table t{name, {"eps", "value"}, {}};
  for (std::size_t k = 0; k < s.eps.size(); ++k) t.rows.push_back({s.eps[k], s.values[k]});
  r.tables.push_back(std::move(t));
}

}  // namespace

ScenarioReport run_classifier(const ScenarioSpec& spec) {
  ScenarioReport r = begin(spec);
  const std::vector<double> ladder = spec.ladder.values();

  auto run = [&](const std::string& label, const EpsSeries& s) {
    series_table(r, label, s);
    const Classification c = classify(s);
    r.verdicts.push_back(label + ": " + c.describe());
    return c;
  };

  const Classification pw = run("power", planted(ladder, [](double e) { return 1.0 / (e * e); }, "eps^-2"));
  add_check(r, "moderate_power", pw.verdict == Verdict::moderate && std::abs(pw.exponent - 2.0) <= spec.param("exponent_tol"),
            pw.describe());
  const Classification lg =
      run("logarithmic", planted(ladder, [](double e) { return 3.0 * std::abs(std::log(e)); }, "3|log eps|"));
  add_check(r, "log_type", lg.verdict == Verdict::log_type && std::abs(lg.constant - 3.0) <= spec.param("log_constant_tol"),
            lg.describe());
  const Classification cs = run("constant", planted(ladder, [](double) { return 1.7; }, "1.7"));
  add_check(r, "bounded_constant",
            cs.verdict == Verdict::bounded && std::abs(cs.constant - 1.7) <= spec.param("constant_rel_tol") * 1.7,
            cs.describe());

  // Exponential-tail family: the moment of order p' is 1, lower orders vanish faster than any power.
  const ExponentialTailFamily tail{spec.param("p_prime")};
  const double pp = tail.p_prime;
  const Classification below =
      run("tail_below", planted(ladder, [&](double e) { return tail.moment(e, pp - 1.0); }, "E u^(p'-1)"));
  add_check(r, "tail_negligible", below.verdict == Verdict::negligible, below.describe());
  const Classification at = run("tail_at", planted(ladder, [&](double e) { return tail.moment(e, pp); }, "E u^p'"));
  add_check(r, "tail_bounded_at_p_prime", at.verdict == Verdict::bounded && at.constant == 1.0, at.describe());

  // Sliding spike: bounded in L^1, but unbounded along a planted subsequence for a fixed omega.
  const SlidingSpikeFamily spike;
  EpsLadder l1 = spec.ladder;
  l1.eps0 = spec.param("l1_eps0");
  EpsSeries mean = planted(l1.values(), [&](double e) { return spike.mean_abs(e); }, "E|u_eps|");
  mean.descriptor.p = 1;
  const Classification mc = run("spike_l1", mean);
  add_check(r, "spike_l1_bounded", mc.verdict == Verdict::bounded, mc.describe());

  const long double omega = spec.param("omega");
  const auto sub = spike.planted_subsequence(omega, static_cast<int>(count_param(spec, "planted")));
  EpsSeries path;
  bool hits = true;
  for (long double e : sub) {
    const long double v = spike.value(e, omega);
    const long double expected = std::exp(1.0L / e);
    if (!(v > 0.0L) || std::abs(v - expected) > 1e-12L * expected) hits = false;
    path.eps.push_back(static_cast<double>(e));
    path.values.push_back(static_cast<double>(v));
  }
  path.descriptor.quantity = "u_eps(omega)";
  add_check(r, "spike_planted_hits", hits,
            std::to_string(sub.size()) + " planted levels evaluate to exp(1/eps) at omega = " + num(double(omega)));
  const Classification pc = run("spike_pathwise", path);
  add_check(r, "spike_pathwise_not_moderate", pc.verdict != Verdict::moderate, pc.describe());
  return r;
}

}  // namespace colhyp
