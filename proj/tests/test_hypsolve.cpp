#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "colhyp/characteristics.hpp"
#include "colhyp/errors.hpp"
#include "colhyp/hypsolve.hpp"

using namespace colhyp;

namespace {

SmoothField of_x(std::function<double(double)> f0, std::function<double(double)> f1) {
  return SmoothField::of_x([f0, f1](double x, int k) {
    if (k == 0) return f0(x);
    if (k == 1) return f1(x);
    throw ParameterError("first derivative only");
  }, Rect::everywhere(), {}, 1);
}

Grid2D grid(double kappa, double T, std::size_t nx, std::size_t nt) {
  return {Grid1D::from_bounds(-kappa, kappa, nx), Grid1D::from_bounds(0.0, T, nt)};
}

/// max over valid nodes of |u_i - exact|.
double sup_error(const SolutionField& u, std::size_t i, const std::function<double(double, double)>& exact) {
  double worst = 0.0;
  for (std::size_t it = 0; it < u.grid().t.size(); ++it) {
    const auto [first, last] = u.valid_range(it);
    for (std::size_t ix = first; ix <= last && first <= last; ++ix)
      worst = std::max(worst, std::abs(u.at_node(i, ix, it) - exact(u.grid().x[ix], u.grid().t[it])));
  }
  return worst;
}

}  // namespace

TEST(SolveSystem, PureTransportOfLinearData) {
  const DeterminacyDomain d{2.0, 1.0, 1.0};
  const auto p = HyperbolicProblem::scalar(SmoothField::constant(1.0), SmoothField::constant(0.0),
                                           SmoothField::constant(0.0), of_x([](double x) { return x; }, [](double) { return 1.0; }), d);
  const SolutionField u = solve_system(p, grid(2.0, 1.0, 81, 41));
  EXPECT_LT(sup_error(u, 0, [](double x, double t) { return x - t; }), 1e-8);
}

TEST(SolveSystem, ZeroSpeedReactionIsExponential) {
  const double a = 0.7;
  const DeterminacyDomain d{1.0, 0.0, 1.0};
  const auto p = HyperbolicProblem::scalar(SmoothField::constant(0.0), SmoothField::constant(a), SmoothField::constant(0.0),
                                           of_x([](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }), d);
  SolverOptions opt;
  opt.tol = 1e-12;
  const SolutionField u = solve_system(p, grid(1.0, 1.0, 21, 401), opt);
  EXPECT_LT(sup_error(u, 0, [a](double x, double t) { return std::cos(x) * std::exp(a * t); }), 1e-6);
}

TEST(SolveSystem, ConstantSourceIntegratesExactly) {
  const DeterminacyDomain d{1.0, 0.0, 1.0};
  const auto p = HyperbolicProblem::scalar(SmoothField::constant(0.0), SmoothField::constant(0.0), SmoothField::constant(1.0),
                                           SmoothField::constant(0.0), d);
  const SolutionField u = solve_system(p, grid(1.0, 1.0, 11, 11));
  EXPECT_LT(sup_error(u, 0, [](double, double t) { return t; }), 1e-14);
}

TEST(SolveSystem, NodesOutsideTrapezoidAreInvalid) {
  const DeterminacyDomain d{1.0, 1.0, 0.5};
  const auto p = HyperbolicProblem::scalar(SmoothField::constant(1.0), SmoothField::constant(0.0), SmoothField::constant(0.0),
                                           SmoothField::constant(1.0), d);
  const SolutionField u = solve_system(p, grid(1.0, 0.5, 21, 6));
  EXPECT_TRUE(u.valid(0, 0));
  EXPECT_FALSE(u.valid(0, 5));
  EXPECT_TRUE(std::isnan(u.at_node(0, 0, 5)));
  EXPECT_THROW(u(0, 0.95, 0.5), DomainError);
}

TEST(SolveSystem, BackwardTimeByMirroring) {
  const DeterminacyDomain d{2.0, 1.0, 1.0};
  const auto p = HyperbolicProblem::scalar(SmoothField::constant(0.5), SmoothField::constant(0.0), SmoothField::constant(0.0),
                                           of_x([](double x) { return std::sin(x); }, [](double x) { return std::cos(x); }), d);
  const Grid2D g{Grid1D::from_bounds(-2.0, 2.0, 161), Grid1D::from_bounds(-1.0, 0.0, 41)};
  SolverOptions opt;
  opt.tol = 1e-12;
  const SolutionField u = solve_system(p, g, opt);
  EXPECT_LT(sup_error(u, 0, [](double x, double t) { return std::sin(x - 0.5 * t); }), 1e-6);
}

TEST(SolveSystem, RejectsMismatchedShapes) {
  HyperbolicProblem p = HyperbolicProblem::scalar(SmoothField::constant(1.0), SmoothField::constant(0.0),
                                                  SmoothField::constant(0.0), SmoothField::constant(0.0), {2.0, 1.0, 1.0});
  p.u0.push_back(SmoothField::constant(1.0));
  EXPECT_THROW(p.validate(), ShapeError);
}

TEST(SolveSystem, CoupledSystemMatchesRotation) {
  // u' = -v, v' = u with zero speeds: rotation of the data.
  HyperbolicProblem p;
  p.lambda = {SmoothField::constant(0.0), SmoothField::constant(0.0)};
  p.f = {{SmoothField::constant(0.0), SmoothField::constant(-1.0)}, {SmoothField::constant(1.0), SmoothField::constant(0.0)}};
  p.g = {SmoothField::constant(0.0), SmoothField::constant(0.0)};
  p.u0 = {SmoothField::constant(1.0), SmoothField::constant(0.0)};
  p.domain = {1.0, 0.0, 1.0};
  SolverOptions opt;
  opt.tol = 1e-12;
  const SolutionField u = solve_system(p, grid(1.0, 1.0, 5, 401), opt);
  EXPECT_LT(sup_error(u, 0, [](double, double t) { return std::cos(t); }), 1e-5);
  EXPECT_LT(sup_error(u, 1, [](double, double t) { return std::sin(t); }), 1e-5);
}

TEST(Gronwall, ZeroDataGivesZeroBound) {
  const DeterminacyDomain d{1.0, 1.0, 0.5};
  const auto p = HyperbolicProblem::scalar(SmoothField::constant(1.0), SmoothField::constant(2.0), SmoothField::constant(0.0),
                                           SmoothField::constant(0.0), d);
  const SolutionField u = solve_system(p, grid(1.0, 0.5, 41, 21));
  const GronwallReport g = gronwall_check(p, u);
  EXPECT_EQ(g.rhs, 0.0);
  EXPECT_LE(g.lhs, 1e-8);
  EXPECT_TRUE(g.holds);
}

TEST(Gronwall, TransportOfLinearDataIsBoundedByReachableData) {
  const DeterminacyDomain d{2.0, 1.0, 1.0};
  const auto p = HyperbolicProblem::scalar(SmoothField::constant(1.0), SmoothField::constant(0.0), SmoothField::constant(0.0),
                                           of_x([](double x) { return x; }, [](double) { return 1.0; }), d);
  const SolutionField u = solve_system(p, grid(2.0, 1.0, 81, 41));
  const GronwallReport g = gronwall_check(p, u);
  EXPECT_NEAR(g.sup_u0, 2.0, 1e-12);
  EXPECT_NEAR(g.lhs, 2.0, 1e-8);
  EXPECT_TRUE(g.holds);
}

TEST(Gronwall, HoldsForRandomSmoothProblems) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), w = 3.0 * u(rng);
    const SmoothField lam(Rect::everywhere(), [a, w](double x, double t, int dx, int dt) {
      if (dx + dt > 0) throw ParameterError("value only");
      return a * std::cos(w * x + t);
    }, {}, Dependence::xt, 0);
    const SmoothField f(Rect::everywhere(), [b](double x, double t, int, int) { return b * std::sin(x * t); }, {}, Dependence::xt, 0);
    const SmoothField g(Rect::everywhere(), [c](double x, double, int, int) { return c * std::exp(-x * x); }, {}, Dependence::x, 0);
    const SmoothField u0 = of_x([w](double x) { return std::sin(w * x); }, [w](double x) { return w * std::cos(w * x); });
    const std::vector<SmoothField> speeds = {lam};
    const DeterminacyDomain d = determinacy_domain(speeds, 1.0, 0.5);
    const auto p = HyperbolicProblem::scalar(lam, f, g, u0, d);
    const SolutionField sol = solve_system(p, grid(1.0, 0.5, 81, 41));
    EXPECT_TRUE(gronwall_check(p, sol).holds) << "trial " << trial;
  }
}

TEST(WaveSystem, DalembertForSineData) {
  const DeterminacyDomain d{2.0, 1.0, 1.0};
  WaveEquation eq;
  eq.u0 = of_x([](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
  SolverOptions opt;
  opt.tol = 1e-12;
  const SolutionField u = solve_system(wave_to_system(eq, d), grid(2.0, 1.0, 201, 101), opt);
  EXPECT_LT(sup_error(u, 2, [](double x, double t) { return 0.5 * (std::sin(x + t) + std::sin(x - t)); }), 1e-4);
}

TEST(WaveSystem, DalembertForCosineVelocity) {
  const DeterminacyDomain d{2.0, 1.0, 1.0};
  WaveEquation eq;
  eq.u1 = of_x([](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); });
  SolverOptions opt;
  opt.tol = 1e-12;
  const SolutionField u = solve_system(wave_to_system(eq, d), grid(2.0, 1.0, 201, 101), opt);
  EXPECT_LT(sup_error(u, 2, [](double x, double t) { return 0.5 * (std::sin(x + t) - std::sin(x - t)); }), 1e-4);
}

TEST(WaveSystem, ZeroDataStaysZero) {
  const DeterminacyDomain d{1.0, 1.0, 0.5};
  const SolutionField u = solve_system(wave_to_system(WaveEquation{}, d), grid(1.0, 0.5, 41, 21));
  EXPECT_EQ(sup_error(u, 2, [](double, double) { return 0.0; }), 0.0);
}

TEST(WaveSystem, VanishingSpeedIsRejectedWhenDivisionIsNeeded) {
  WaveEquation eq;
  eq.lambda = SmoothField::of_x([](double x, int k) { return k == 0 ? x : (k == 1 ? 1.0 : 0.0); });
  eq.k = SmoothField::constant(1.0);
  EXPECT_THROW(wave_to_system(eq, {1.0, 1.1, 0.5}), InvertibilityError);
}

TEST(TransportTimeOnly, UnitSpeedShiftsData) {
  const SmoothField u0 = of_x([](double x) { return std::exp(-x * x); }, [](double x) { return -2 * x * std::exp(-x * x); });
  const SolutionField u = transport_t_only(SmoothField::constant(1.0), u0, grid(2.0, 1.0, 41, 11), 0.01);
  EXPECT_LT(sup_error(u, 0, [](double x, double t) { return std::exp(-(x - t) * (x - t)); }), 1e-8);
}

TEST(TransportTimeOnly, SineSpeedUsesAntiderivative) {
  const SmoothField u0 = of_x([](double x) { return std::sin(3 * x); }, [](double x) { return 3 * std::cos(3 * x); });
  const SmoothField lam = SmoothField::of_t([](double t, int k) { return k == 0 ? std::sin(t) : std::cos(t); }, Rect::everywhere(), {}, 1);
  const SolutionField u = transport_t_only(lam, u0, grid(2.0, 1.0, 41, 21), 0.01);
  EXPECT_LT(sup_error(u, 0, [](double x, double t) { return std::sin(3 * (x - 1.0 + std::cos(t))); }), 1e-7);
  const std::vector<double> shift = integrate_speed(lam, {0.0, 0.5, 1.0}, 0.01);
  EXPECT_NEAR(shift[2], 1.0 - std::cos(1.0), 1e-9);
}

TEST(GeometricWave, FlatCurveIsUnitSpeedDalembert) {
  const ArclengthMap L(SmoothField::constant(0.0), Grid1D::from_bounds(-3.0, 3.0, 601));
  const SmoothField u0 = of_x([](double x) { return std::exp(-x * x); }, [](double x) { return -2 * x * std::exp(-x * x); });
  const SolutionField u = geometric_wave_solve(L, u0, SmoothField::constant(0.0), grid(1.5, 1.0, 61, 21));
  EXPECT_LT(sup_error(u, 0, [](double x, double t) { return 0.5 * (std::exp(-(x - t) * (x - t)) + std::exp(-(x + t) * (x + t))); }), 1e-4);
}

TEST(GeometricWave, LineOfSlopeOneSlowsTheWave) {
  const double c = 1.0 / std::sqrt(2.0);
  const ArclengthMap L(SmoothField::constant(1.0), Grid1D::from_bounds(-3.0, 3.0, 601));
  const SmoothField u0 = of_x([](double x) { return std::exp(-x * x); }, [](double x) { return -2 * x * std::exp(-x * x); });
  const SmoothField u1 = of_x([](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); });
  const SolutionField u = geometric_wave_solve(L, u0, u1, grid(1.5, 1.0, 61, 21));
  const auto exact = [c](double x, double t) {
    return 0.5 * (std::exp(-(x - c * t) * (x - c * t)) + std::exp(-(x + c * t) * (x + c * t))) +
           0.5 / c * (std::sin(x + c * t) - std::sin(x - c * t));
  };
  EXPECT_LT(sup_error(u, 0, exact), 1e-4);
}

TEST(GeometricWave, SystemFormAgreesWithClosedForm) {
  const double slope = 0.5;
  const SmoothField cp = SmoothField::constant(slope);
  const SmoothField u0 = of_x([](double x) { return std::exp(-x * x); }, [](double x) { return -2 * x * std::exp(-x * x); });
  const DeterminacyDomain d{1.5, 1.0, 0.5};
  SolverOptions opt;
  opt.tol = 1e-12;
  const SolutionField sys = solve_system(geometric_wave_system(cp, u0, SmoothField::constant(0.0), d), grid(1.5, 0.5, 241, 81), opt);
  const ArclengthMap L(cp, Grid1D::from_bounds(-3.0, 3.0, 601));
  const SolutionField ref = geometric_wave_solve(L, u0, SmoothField::constant(0.0), grid(1.5, 0.5, 241, 81));
  double worst = 0.0;
  for (std::size_t it = 0; it < sys.grid().t.size(); ++it) {
    const auto [first, last] = sys.valid_range(it);
    for (std::size_t ix = first; ix <= last && first <= last; ++ix)
      worst = std::max(worst, std::abs(sys.at_node(2, ix, it) - ref.at_node(0, ix, it)));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(SolutionField, CsvListsValidNodesOnly) {
  const DeterminacyDomain d{1.0, 1.0, 0.5};
  const auto p = HyperbolicProblem::scalar(SmoothField::constant(1.0), SmoothField::constant(0.0), SmoothField::constant(0.0),
                                           SmoothField::constant(1.0), d);
  const SolutionField u = solve_system(p, grid(1.0, 0.5, 5, 3));
  std::ostringstream os;
  u.write_csv(os);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "x,t,u1");
  EXPECT_EQ(s.find("nan"), std::string::npos);
}
