#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "colhyp/errors.hpp"
#include "colhyp/mollifier.hpp"
#include "colhyp/scenarios.hpp"

using namespace colhyp;
using boost::math::quadrature::gauss_kronrod;

namespace {

/// Var W_eps(t) through the stochastic integral form W_eps(t) = int g(u) dW(u):
/// g(u) = K(t - u) for u > 0 and -(mass - K(t - u)) for u < 0, K the kernel CDF.
double sigma_squared_ito(const Mollifier& m, double eps, double t) {
  const double r = m.support_radius(eps);
  const double mass = m.kernel_cdf(r + 1.0, eps);
  auto pos = [&](double u) {
    const double k = m.kernel_cdf(t - u, eps);
    return k * k;
  };
  auto neg = [&](double u) {
    const double k = mass - m.kernel_cdf(t - u, eps);
    return k * k;
  };
  // Below t - r the kernel CDF equals the full mass, so that stretch is exact.
  const double lo = std::max(0.0, t - r);
  double acc = mass * mass * lo;
  for (double a = lo; a < t + r; a += eps) acc += gauss_kronrod<double, 31>::integrate(pos, a, std::min(a + eps, t + r), 0);
  for (double a = t - r; a < 0.0; a += eps) acc += gauss_kronrod<double, 31>::integrate(neg, a, std::min(a + eps, 0.0), 0);
  return acc;
}

ScenarioReport run_with(const std::string& name, const std::map<std::string, double>& overrides = {},
                        std::size_t samples = 0) {
  ScenarioSpec s = default_spec(name);
  s.seed = 7;
  for (const auto& [k, v] : overrides) s.params.at(k) = v;
  if (samples) s.samples = samples;
  return run_scenario(s);
}

std::string failing(const ScenarioReport& r) {
  std::ostringstream os;
  for (const auto& c : r.checks)
    if (!c.passed) os << c.name << ": " << c.detail << "; ";
  return os.str();
}

}  // namespace

TEST(Registry, EveryScenarioHasDefaults) {
  const auto names = scenario_names();
  for (const char* n : {"calibration", "gronwall", "mollifier", "ogawa", "additive_noise_wave", "geometric_wave",
                        "random_speed_wave", "classifier", "transport"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
    EXPECT_NO_THROW(default_spec(n).validate());
    EXPECT_FALSE(scenario_description(n).empty());
  }
  EXPECT_THROW(default_spec("no_such_scenario"), ParameterError);
}

TEST(Registry, UnknownParameterIsRefused) {
  EXPECT_THROW(default_spec("ogawa").param("epsilonn"), ParameterError);
  EXPECT_EQ(default_spec("ogawa").param("eps"), 0.01);
}

TEST(Registry, SubseedsDependOnPurposeLevelAndSample) {
  ScenarioSpec a = default_spec("ogawa"), b = default_spec("gronwall");
  a.seed = b.seed = 3;
  EXPECT_NE(a.seed_for(1, 0, 0), a.seed_for(1, 0, 1));
  EXPECT_NE(a.seed_for(1, 0, 0), a.seed_for(2, 0, 0));
  EXPECT_NE(a.seed_for(1, 0, 0), b.seed_for(1, 0, 0));
  EXPECT_EQ(a.seed_for(1, 2, 5), a.seed_for(1, 2, 5));
}

TEST(SigmaEps, MatchesStochasticIntegralForm) {
  const Mollifier m = build_mollifier(0);
  for (double eps : {0.2, 0.05, 0.01})
    for (double t : {0.1, 0.5, 1.0}) EXPECT_NEAR(sigma_eps_squared(m, eps, t), sigma_squared_ito(m, eps, t), 1e-8) << eps << " " << t;
}

TEST(SigmaEps, ApproachesTimeForSmallEps) {
  const Mollifier m = build_mollifier(0);
  EXPECT_NEAR(sigma_eps_squared(m, 0.01, 1.0), 1.0, 0.05);
  for (double t : {0.5, 0.75, 1.0}) EXPECT_NEAR(sigma_eps_squared(m, 0.01, t) / t, 1.0, 0.05);
}

TEST(ConeGeometry, KnownIntersectionAreas) {
  EXPECT_NEAR(cone_intersection_area(0.0, 1.0, 0.0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(cone_intersection_area(0.0, 1.0, 0.5, 1.0), 0.5625, 1e-14);
  EXPECT_NEAR(cone_intersection_area(0.0, 1.0, -0.25, 0.5), 0.25, 1e-14);
  EXPECT_NEAR(cone_intersection_area(0.5, 1.0, -0.25, 0.5), 0.140625, 1e-14);
  EXPECT_EQ(cone_intersection_area(0.0, 1.0, 2.5, 1.0), 0.0);
  EXPECT_NEAR(cone_intersection_area(0.0, 1.0, 2.0, 1.0), 0.0, 1e-14);
  EXPECT_NEAR(cone_intersection_area(0.3, 0.7, -0.1, 1.2), cone_intersection_area(-0.1, 1.2, 0.3, 0.7), 1e-14);
}

TEST(ConeGeometry, SmoothedIndicatorInsideOutsideAndSymmetric) {
  const Mollifier m = build_mollifier(0);
  const double eps = 0.02;
  EXPECT_NEAR(smoothed_cone_indicator(m, eps, 0.0, 1.0, 0.0, 0.5), 1.0, 1e-9);
  EXPECT_EQ(smoothed_cone_indicator(m, eps, 0.0, 1.0, 1.5, 0.5), 0.0);
  EXPECT_EQ(smoothed_cone_indicator(m, eps, 0.0, 1.0, 0.0, 1.5), 0.0);
  EXPECT_NEAR(smoothed_cone_indicator(m, eps, 0.0, 1.0, 0.3, 0.69), smoothed_cone_indicator(m, eps, 0.0, 1.0, -0.3, 0.69), 1e-12);
  // On a straight edge, away from corners, half the kernel mass lies inside.
  EXPECT_NEAR(smoothed_cone_indicator(m, eps, 0.0, 1.0, 0.5, 0.5), 0.5, 1e-6);
}

TEST(Scenario, MollifierSuitePasses) {
  const ScenarioReport r = run_with("mollifier");
  EXPECT_TRUE(r.passed()) << failing(r);
  EXPECT_NE(r.find("cutoff_independence"), nullptr);
}

TEST(Scenario, CalibrationPassesWithinRuntime) {
  const ScenarioReport r = run_with("calibration");
  EXPECT_TRUE(r.passed()) << failing(r);
  EXPECT_LT(r.seconds, 10.0);
}

TEST(Scenario, TransportMatchesExactSolutionWithReactionAndSource) {
  const ScenarioReport r = run_with("transport", {{"lambda", -0.7}, {"f", 0.4}, {"g", 0.2}});
  EXPECT_TRUE(r.passed()) << failing(r);
}

TEST(Scenario, TransportWithEmptyDomainThrows) {
  EXPECT_THROW(run_with("transport", {{"kappa", 1.0}, {"T", 1.0}, {"lambda", 1.0}}), EmptyDomainError);
}

TEST(Scenario, GronwallHoldsForAllDraws) {
  const ScenarioReport r = run_with("gronwall");
  ASSERT_NE(r.find("gronwall_bound"), nullptr);
  EXPECT_TRUE(r.find("gronwall_bound")->passed) << r.find("gronwall_bound")->detail;
}

TEST(Scenario, ClassifierConformance) {
  const ScenarioReport r = run_with("classifier");
  EXPECT_TRUE(r.passed()) << failing(r);
  EXPECT_EQ(r.verdicts.size(), 7u);
}

TEST(Scenario, ConstantRandomSpeedReducesToDalembert) {
  const ScenarioReport r = run_with("random_speed_wave", {{"lambda_lo", 1.0}, {"lambda_hi", 1.0}}, 2);
  const Table* t = r.table("consistency");
  ASSERT_NE(t, nullptr);
  // Where the cut-off is inactive the mollified constant is the constant itself.
  const Mollifier m = build_mollifier(0);
  const std::vector<double> ladder = default_spec("random_speed_wave").ladder.values();
  std::size_t checked = 0;
  for (const auto& row : t->rows)
    for (std::size_t k = 0; k < ladder.size(); ++k)
      if (m.support_radius(ladder[k]) <= m.cutoff_inner()) {
        EXPECT_LT(row[2 + k], 1e-9) << ladder[k];
        ++checked;
      }
  EXPECT_GT(checked, 0u);
}

TEST(Scenario, RandomSpeedRangeMustFitDomainSlope) {
  EXPECT_THROW(run_with("random_speed_wave", {{"lambda_hi", 2.5}}, 1), ParameterError);
}

TEST(Scenario, RepeatedRunsGiveIdenticalTables) {
  const ScenarioReport a = run_with("gronwall"), b = run_with("gronwall");
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t k = 0; k < a.tables.size(); ++k) {
    std::ostringstream x, y;
    a.tables[k].write_csv(x);
    b.tables[k].write_csv(y);
    EXPECT_EQ(x.str(), y.str());
  }
}

TEST(Tables, CsvFormat) {
  const Table t{"demo", {"a", "b"}, {{0.5, 0.001}, {-2.0, 3.0}}};
  std::ostringstream os;
  t.write_csv(os);
  EXPECT_EQ(os.str(), "a,b\n0.5,0.001\n-2,3\n");
}
