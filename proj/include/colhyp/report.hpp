#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "colhyp/config.hpp"
#include "colhyp/scenarios.hpp"

namespace colhyp {

/// Writes config.json, one CSV per table (plus ladder.csv) and verdict.txt into `dir`.
///
/// `report` is empty when the scenario failed with `error`; the verdict file then records the
/// error instead of checks.
void write_report(const std::filesystem::path& dir, const RunConfig& config,
                  const std::optional<ScenarioReport>& report, const std::string& error);

}  // namespace colhyp
