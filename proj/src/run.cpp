#include "colhyp/run.hpp"

#include <optional>

#include "colhyp/errors.hpp"
#include "colhyp/report.hpp"

namespace colhyp {

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  out.report_dir = config.output_dir;
  std::optional<ScenarioReport> report;
  try {
    report = run_scenario(config.spec);
    out.exit_code = report->passed() ? exit_pass : exit_check_failure;
  } catch (const EmptyDomainError& e) {
    out.error = std::string("empty domain: ") + e.what();
    out.exit_code = exit_config_error;
  } catch (const ParameterError& e) {
    out.error = std::string("parameter error: ") + e.what();
    out.exit_code = exit_config_error;
  } catch (const std::exception& e) {
    out.error = std::string("runtime error: ") + e.what();
    out.exit_code = exit_runtime_error;
  }
  write_report(config.output_dir, config, report, out.error);
  return out;
}

}  // namespace colhyp
