#pragma once

#include <filesystem>
#include <string>

#include "colhyp/config.hpp"

namespace colhyp {

enum ExitCode : int { exit_pass = 0, exit_check_failure = 1, exit_config_error = 2, exit_runtime_error = 3 };

struct RunOutcome {
  int exit_code = exit_pass;
  std::filesystem::path report_dir;
  /// Empty unless the scenario threw.
  std::string error;
};

/// Run the configured scenario and write its report under config.output_dir.
/// Parameter and domain problems found while running give exit_config_error, other library
/// errors exit_runtime_error; both are recorded in the report.
RunOutcome run(const RunConfig& config);

}  // namespace colhyp
