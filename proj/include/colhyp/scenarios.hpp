#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "colhyp/mollifier.hpp"

namespace colhyp {

/// Parameters of one built-in scenario run.
///
/// Scenario-specific numbers live in `params`; `default_spec` fills every key a scenario
/// reads, and `param` refuses keys it does not know.
struct ScenarioSpec {
  std::string name;
  std::uint64_t seed = 0;
  int vanishing_moments = 0;
  double cutoff_inner = 1.0;
  double cutoff_outer = 2.0;
  EpsLadder ladder;
  std::size_t samples = 1000;
  /// Worker threads (0: machine parallelism).
  std::size_t jobs = 0;
  std::map<std::string, double> params;

  double param(const std::string& key) const;
  Mollifier mollifier() const;
  /// Seed for (purpose, level, sample), independent across scenarios sharing a master seed.
  std::uint64_t seed_for(int purpose, std::uint64_t level, std::uint64_t sample) const;
  void validate() const;
};

/// Names accepted by default_spec and run_scenario.
std::vector<std::string> scenario_names();
std::string scenario_description(const std::string& name);
/// Spec with the documented defaults; ParameterError for unknown names.
ScenarioSpec default_spec(const std::string& name);

struct ScenarioCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Numeric table written as CSV.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write_csv(std::ostream& os) const;
};

struct ScenarioReport {
  std::string scenario;
  ScenarioSpec spec;
  std::vector<ScenarioCheck> checks;
  std::vector<Table> tables;
  /// Classifier verdicts, one line each.
  std::vector<std::string> verdicts;
  /// Norm interchange instances measured (sup of norm vs norm of sup) and violations.
  std::size_t interchange_checks = 0;
  std::size_t interchange_violations = 0;
  double seconds = 0.0;

  bool passed() const;
  const ScenarioCheck* find(const std::string& check) const;
  const Table* table(const std::string& name) const;
};

/// Dispatch by spec.name.
ScenarioReport run_scenario(const ScenarioSpec& spec);

/// Constant-coefficient transport and d'Alembert solutions against closed forms.
ScenarioReport run_calibration(const ScenarioSpec& spec);
/// Random smooth systems: the a-priori sup bound must hold for every draw.
ScenarioReport run_gronwall(const ScenarioSpec& spec);
/// Mass, moments, derivative commutation, cut-off independence and polynomial reproduction.
ScenarioReport run_mollifier(const ScenarioSpec& spec);
/// Transport with mollified white noise in time and the heat equation of its mean.
ScenarioReport run_ogawa(const ScenarioSpec& spec);
/// Constant-speed wave forced by mollified space-time white noise.
ScenarioReport run_additive_noise_wave(const ScenarioSpec& spec);
/// Wave equation on the graph of a flat, C^1 sine or Brownian curve.
ScenarioReport run_geometric_wave(const ScenarioSpec& spec);
/// Wave equation with a mollified bounded C^1 random speed against the classical solution.
ScenarioReport run_random_speed_wave(const ScenarioSpec& spec);
/// Planted series and the two counterexample families through the classifier.
ScenarioReport run_classifier(const ScenarioSpec& spec);
/// Ad-hoc scalar problem u_t + lambda u_x = f u + g with Gaussian data.
ScenarioReport run_transport(const ScenarioSpec& spec);

/// E(W_eps(t)^2) for two-sided Brownian W mollified by chi rho_eps, by double quadrature of
/// the kernel against the Brownian covariance.
double sigma_eps_squared(const Mollifier& m, double eps, double t);

/// Lebesgue measure of the intersection of the backward light cones of (x1, t1), (x2, t2),
/// by polygon clipping.
double cone_intersection_area(double x1, double t1, double x2, double t2);

/// (1_Gamma(x,t) * k_eps)(y, s), k_eps(y, s) = chi rho_eps(y) chi rho_eps(s).
double smoothed_cone_indicator(const Mollifier& m, double eps, double x, double t, double y, double s);

}  // namespace colhyp
