#pragma once

#include <filesystem>
#include <string>

#include "colhyp/scenarios.hpp"

namespace colhyp {

/// Validated contents of a run configuration file.
///
/// Format (JSON):
///   {"scenario": "ogawa", "seed": 42, "output_dir": "out/ogawa", "jobs": 0, "samples": 2000,
///    "mollifier": {"vanishing_moments": 0, "cutoff_inner": 1, "cutoff_outer": 2},
///    "ladder": {"eps0": 0.5, "ratio": 0.5, "count": 8, "scale": "identity"},
///    "params": {"eps": 0.01}}
/// Only `scenario` and `seed` are mandatory. `params` may only override keys the scenario
/// declares.
struct RunConfig {
  ScenarioSpec spec;
  std::filesystem::path output_dir = "colhyp-report";
  int verbosity = 1;

  void validate() const;
  /// The complete configuration with every default filled in, as pretty-printed JSON.
  std::string echo() const;
};

/// ConfigError naming the key path for missing files, syntax errors and schema violations.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace colhyp
