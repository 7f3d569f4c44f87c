#pragma once

// Batch runner: seeded suites of checks, CSV/JSON reports and gluing scenes.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "boehm/boehmian.hpp"

namespace boehm {

struct RunConfig {
  double grid_h = 1e-3;
  int horizon = 20;
  double tol_sup = 1e-3;
  double tol_quad = 1e-6;
  std::uint64_t seed = 20240917;
  std::vector<std::string> suites;  // empty means every registered suite
  std::string output = "report";
  bool timing = false;               // wall_ms is written as 0 unless set

  /// Throws InvalidArgument naming the first offending field.
  void validate() const;
  EquivParams equiv() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

/// Registered suite ids in report order.
const std::vector<std::string>& suite_ids();

struct Row {
  std::string suite;
  std::string case_id;
  std::string lemma_ref;
  std::string status;   // verified | refuted | inconclusive | error
  double max_residual = 0.0;
  double bound = 0.0;
  int horizon = 0;
  double wall_ms = 0.0;
  std::string note;
  std::vector<double> residuals;
};

/// Collects rows for one suite; each case runs timed and exceptions become
/// error rows.
class CaseLog {
 public:
  CaseLog(std::string suite, bool timing);
  void run(const std::string& case_id, const std::string& lemma_ref,
           const std::function<CheckResult()>& body);
  std::vector<Row> take() { return std::move(rows_); }

 private:
  std::string suite_;
  bool timing_;
  std::vector<Row> rows_;
};

/// Rows of one suite. Throws InvalidArgument for an unknown id.
std::vector<Row> run_suite(const std::string& id, const RunConfig& cfg);

struct Counts {
  int verified = 0;
  int refuted = 0;
  int inconclusive = 0;
  int error = 0;
};
Counts count(const std::vector<Row>& rows);

/// Header comment, column line and one line per row.
std::string csv_report(const std::vector<Row>& rows, const RunConfig& cfg);
/// suite, case_id, step, residual for every recorded trace.
std::string trace_table(const std::vector<Row>& rows);
nlohmann::json summary(const std::vector<Row>& rows, const RunConfig& cfg);

struct RunOutcome {
  std::vector<Row> rows;
  int exit_code = 0;   // 0 clean, 1 refutations or errors
};

/// Runs the configured suites and writes report.csv, traces.csv and
/// summary.json into cfg.output.
RunOutcome run(const RunConfig& cfg);

struct SceneOutcome {
  nlohmann::json report;   // glued descriptor plus contract rows
  std::vector<Row> rows;
  int exit_code = 0;
};

/// Runs a gluing scene:
///   {"pieces": [set, ...], "sections": [descriptor, ...],
///    "mode": "pair" | "finite" | "countable", "n_max": k,
///    "oracle": descriptor, "params": {RunConfig fields}}
/// Section i lives on pieces[i]; the oracle, when given, is built on the
/// union and compared with the glued class. Throws InvalidArgument for a
/// malformed scene; gluing failures become error rows with exit code 1.
SceneOutcome run_scene(const nlohmann::json& scene, const RunConfig& cfg);

}  // namespace boehm
