#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sre/errors.hpp"
#include "sre/runner.hpp"

using namespace sre;
using json = nlohmann::json;

namespace {
const json small_grid = {{"sizes", {8, 12, 16}}, {"samples", 400}};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_path(const json& j) {
  try {
    ExperimentConfig::from_json(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}
}  // namespace

TEST_CASE("enumerate NC(4) reports 14") {
  auto cfg = ExperimentConfig::from_json({{"checks", {{{"type", "enumerate"}, {"n", 4}, {"expect", 14}}}}});
  auto report = run_experiment(cfg);
  REQUIRE(report.checks.size() == 1);
  CHECK(report.checks[0].details["count"] == 14);
  CHECK(report.checks[0].verdict == Verdict::Pass);
  CHECK(report.exit_code() == 0);
  CHECK(report.table().find("count 14") != std::string::npos);

  auto wrong = ExperimentConfig::from_json({{"checks", {{{"type", "enumerate"}, {"n", 4}, {"expect", 13}}}}});
  CHECK(run_experiment(wrong).exit_code() == 2);
}

TEST_CASE("empty checks give a valid run") {
  auto report = run_experiment(ExperimentConfig::from_json(json::object()));
  CHECK(report.checks.empty());
  CHECK(report.exit_code() == 0);
  CHECK(report.raw_csv() == EstimateRow::csv_header() + "\n");
  auto j = report.to_json();
  CHECK(j["checks"].empty());
  CHECK(render_report_table(j).rfind("check", 0) == 0);
}

TEST_CASE("defaults are expanded explicitly") {
  auto cfg = ExperimentConfig::from_json(
      {{"seed", 9}, {"tolerance", 0.3}, {"checks", {{{"type", "axiom_ii"}}, {{"type", "axiom_ii"}, {"seed", 4}}}}});
  REQUIRE(cfg.checks.size() == 2);
  CHECK(cfg.checks[0]["name"] == "axiom_ii-1");
  CHECK(cfg.checks[0]["tolerance"] == 0.3);
  CHECK(cfg.checks[0]["seed"] == 9);
  CHECK(cfg.checks[0]["ensemble"]["seed"] == 9);
  CHECK(cfg.checks[1]["seed"] == 4);
  CHECK(cfg.checks[0]["n"] == 2);
  CHECK(cfg.checks[0]["pattern"].size() == 2);

  cfg.override_seed(11);
  CHECK(cfg.checks[0]["seed"] == 11);
  CHECK(cfg.checks[1]["seed"] == 4);
  cfg.override_tolerance(0.1);
  CHECK(cfg.checks[0]["tolerance"] == 0.1);
}

TEST_CASE("config errors carry the JSON path") {
  CHECK(config_error_path({{"checks", {{{"type", "nope"}}}}}) == "/checks/0/type");
  CHECK(config_error_path({{"checks", {{{"n", 2}}}}}) == "/checks/0/type");
  CHECK(config_error_path({{"bogus", 1}}) == "/bogus");
  CHECK(config_error_path({{"checks", {{{"type", "axiom_ii"}, {"n", 7}}}}}) == "/checks/0/n");
  CHECK(config_error_path({{"checks", {{{"type", "enumerate"}, {"name", "a"}}, {{"type", "enumerate"}, {"name", "a"}}}}}) ==
        "/checks/1/name");
  CHECK(config_error_path({{"checks", {{{"type", "proposition"}}}}}) == "/checks/0/transform");
  CHECK(config_error_path({{"checks", {{{"type", "oracle"}, {"cycles", "2,x"}}}}}) == "/checks/0/cycles");
  CHECK(config_error_path({{"jobs", 0}}) == "/jobs");
  CHECK(config_error_path({{"checks", {{{"type", "estimate"}, {"observable", {{"moments", 1}}}}}}}) ==
        "/checks/0/observable");
  CHECK(config_error_path({{"checks", {{{"type", "axiom_ii"}, {"grid", {{"sizes", {8}}}}}}}}).rfind("/checks/0/grid", 0) ==
        0);
}

TEST_CASE("axiom iv trace check has target -2") {
  auto cfg = ExperimentConfig::from_json(
      {{"grid", small_grid}, {"checks", {{{"type", "trace_cumulant"}, {"name", "trace22"}, {"powers", {2, 2}}}}}});
  auto report = run_experiment(cfg);
  REQUIRE(report.checks.size() == 1);
  REQUIRE(report.checks[0].target);
  CHECK(*report.checks[0].target == doctest::Approx(-2.0));
  auto table = report.table();
  CHECK(table.find("trace22") != std::string::npos);
  CHECK(table.find("-2.0") != std::string::npos);
}

TEST_CASE("oracle check modes") {
  auto cfg = ExperimentConfig::from_json({{"checks",
                                           {{{"type", "oracle"}, {"cycles", "2,2"}},
                                            {{"type", "oracle"}, {"cycles", "2,2"}, {"mode", "claim"}},
                                            {{"type", "oracle"}, {"cycles", "2,2"}, {"mode", "entrywise"}}}}});
  auto report = run_experiment(cfg);
  CHECK(report.checks[0].details["exponent"] == -4);
  CHECK(report.checks[1].details["a_leading_matches"] == true);
  for (const auto& c : report.checks) CHECK(c.verdict == Verdict::Pass);
}

TEST_CASE("echo reproduces the CSVs byte for byte, across job counts") {
  const json base = {{"seed", 5},
                     {"grid", small_grid},
                     {"checks",
                      {{{"type", "axiom_ii"}},
                       {{"type", "estimate"}, {"observable", {{"traces", {1, 1}}}}},
                       {{"type", "proposition"}, {"transform", {{"poly", {{"monomial", 2}}}}}}}}};
  auto cfg = ExperimentConfig::from_json(base);
  auto first = run_experiment(cfg);
  auto echo = ExperimentConfig::from_json(first.to_json()["config"]);
  auto second = run_experiment(echo);
  CHECK(first.raw_csv() == second.raw_csv());
  CHECK(first.plot_csv() == second.plot_csv());
  CHECK(echo.to_json() == cfg.to_json());

  json parallel = base;
  parallel["jobs"] = 3;
  auto third = run_experiment(ExperimentConfig::from_json(parallel));
  CHECK(third.jobs == 3);
  CHECK(first.raw_csv() == third.raw_csv());
  CHECK(first.plot_csv() == third.plot_csv());

  CHECK(first.checks[2].parts.size() == 4);
  CHECK(first.plot_csv().find("proposition-3/transformed:") != std::string::npos);
}

TEST_CASE("write_outputs and report rendering") {
  auto dir = std::filesystem::temp_directory_path() / "sre_runner_test";
  std::filesystem::remove_all(dir);
  auto cfg = ExperimentConfig::from_json(
      {{"grid", small_grid}, {"checks", {{{"type", "enumerate"}, {"what", "connecting"}, {"gamma", {2, 2}}}, {{"type", "axiom_ii"}}}}});
  auto report = run_experiment(cfg);
  CHECK(report.checks[0].details["count"] == 11);
  write_outputs(report, dir.string());
  for (const char* f : {"report.json", "raw_estimates.csv", "plot.csv"}) CHECK(std::filesystem::exists(dir / f));
  auto j = json::parse(slurp(dir / "report.json"));
  CHECK(j["version"] == kVersion);
  auto csv = render_report_csv(j);
  CHECK(csv.rfind("check,type,target,fitted,error,verdict\n", 0) == 0);
  CHECK(csv.find("axiom_ii-2,axiom_ii,-1,") != std::string::npos);
  std::filesystem::remove_all(dir);
}
