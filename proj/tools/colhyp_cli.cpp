#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "colhyp/config.hpp"
#include "colhyp/errors.hpp"
#include "colhyp/run.hpp"
#include "colhyp/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Colombeau-regularized hyperbolic systems with random coefficients"};
  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  int verbosity = 1;
  bool list = false;
  app.add_option("config", config_path, "run configuration (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "override the master seed");
  auto* out_opt = app.add_option("--output-dir", output_dir, "report directory");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads (0: all cores)");
  app.add_option("--verbosity", verbosity, "0 quiet, 1 summary, 2 checks")->check(CLI::Range(0, 2));
  app.add_flag("--list-scenarios", list, "print the built-in scenarios and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : colhyp::exit_config_error;
  }

  if (list) {
    for (const auto& name : colhyp::scenario_names())
      std::cout << name << "  " << colhyp::scenario_description(name) << '\n';
    return 0;
  }
  if (config_path.empty()) {
    std::cerr << "error: a config file is required\n";
    return colhyp::exit_config_error;
  }

  colhyp::RunConfig config;
  try {
    config = colhyp::parse_config(config_path);
    if (*seed_opt) config.spec.seed = seed;
    if (*out_opt) config.output_dir = output_dir;
    if (*jobs_opt) config.spec.jobs = jobs;
    config.verbosity = verbosity;
  } catch (const colhyp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return colhyp::exit_config_error;
  }

  try {
    const colhyp::RunOutcome outcome = colhyp::run(config);
    if (verbosity >= 1) {
      std::cout << config.spec.name << ": exit " << outcome.exit_code << ", report in "
                << outcome.report_dir.string() << '\n';
      if (!outcome.error.empty()) std::cout << outcome.error << '\n';
    }
    if (verbosity >= 2) {
      std::ifstream verdict(outcome.report_dir / "verdict.txt");
      std::cout << verdict.rdbuf();
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return colhyp::exit_runtime_error;
  }
}
