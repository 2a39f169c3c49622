#include "colhyp/report.hpp"

#include <fstream>

#include "colhyp/errors.hpp"

namespace colhyp {

namespace {

std::ofstream open(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  return out;
}

}  // namespace

void write_report(const std::filesystem::path& dir, const RunConfig& config,
                  const std::optional<ScenarioReport>& report, const std::string& error) {
  std::filesystem::create_directories(dir);
  open(dir / "config.json") << config.echo();

  bool has_ladder = false;
  if (report) {
    for (const auto& t : report->tables) {
      auto out = open(dir / (t.name + ".csv"));
      t.write_csv(out);
      has_ladder = has_ladder || t.name == "ladder";
    }
  }
  if (!has_ladder) {
    Table t{"ladder", {"k", "eps"}, {}};
    const auto eps = config.spec.ladder.values();
    for (std::size_t k = 0; k < eps.size(); ++k) t.rows.push_back({double(k), eps[k]});
    auto out = open(dir / "ladder.csv");
    t.write_csv(out);
  }

  auto v = open(dir / "verdict.txt");
  v << "scenario: " << config.spec.name << '\n';
  v << "master_seed: " << config.spec.seed << '\n';
  if (!report) {
    v << "status: ERROR\n";
    v << "error: " << error << '\n';
    return;
  }
  v << "status: " << (report->passed() ? "PASS" : "FAIL") << '\n';
  for (const auto& c : report->checks)
    v << "check " << c.name << ": " << (c.passed ? "PASS" : "FAIL") << " (" << c.detail << ")\n";
  for (const auto& line : report->verdicts) v << "verdict " << line << '\n';
  v << "interchange: " << report->interchange_checks << " instances, " << report->interchange_violations
    << " violations\n";
  v << "runtime_seconds: " << report->seconds << '\n';
}

}  // namespace colhyp
