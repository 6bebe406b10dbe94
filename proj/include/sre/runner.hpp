#pragma once

// JSON-configured experiment runs: checks in declared order, a JSON report
// and CSV raw data.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sre/scaling.hpp"
#include "sre/theory.hpp"

namespace sre {

inline constexpr const char* kVersion = "1.0.0";

/// Names accepted in "type".
const std::vector<std::string>& check_types();

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string out = "sre-out";
  int jobs = 1;
  double tolerance = 0.25;
  nlohmann::json ensemble = {{"kind", "gue"}};
  NGrid grid;
  /// Fully expanded: every check carries name, type, seed, tolerance,
  /// ensemble, transforms, grid and its own parameters.
  std::vector<nlohmann::json> checks;

  /// Validates and expands defaults; ConfigError carries the JSON pointer.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& file);
  /// Echo sufficient to reproduce the run.
  nlohmann::json to_json() const;

  /// Global overrides re-expand the checks that did not set their own value.
  void override_seed(std::uint64_t s);
  void override_tolerance(double t);

 private:
  nlohmann::json raw_;
  void expand();
};

/// Expands one check against global defaults (throws ConfigError).
nlohmann::json expand_check(const nlohmann::json& check, const ExperimentConfig& cfg, const std::string& path);

/// Runs one expanded check.
CheckReport run_check(const nlohmann::json& check, int jobs);

struct RunReport {
  nlohmann::json config;
  std::vector<CheckReport> checks;
  int jobs = 1;
  double wall_seconds = 0.0;

  /// 0 all PASS or BOUNDED, 2 any FAIL.
  int exit_code() const;
  nlohmann::json to_json() const;
  std::string raw_csv() const;
  std::string plot_csv() const;
  /// Human-readable verdict table.
  std::string table() const;
};

/// Runs every check; progress lines go to `log` when given.
RunReport run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Writes report.json, raw_estimates.csv and plot.csv into `dir`.
void write_outputs(const RunReport& report, const std::string& dir);

/// Verdict table and per-check exponent CSV rendered from a report.json.
std::string render_report_table(const nlohmann::json& report);
std::string render_report_csv(const nlohmann::json& report);

nlohmann::json claim_to_json(const ClaimVerdict& v);
/// {"cycles": [[1, 2]]} | {"traces": [2, 2]} | {"dressed": [profile, ...]}
ObservableSpec observable_from_json(const nlohmann::json& j, const std::string& path = "");

}  // namespace sre
