#include "sre/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "sre/errors.hpp"

namespace sre {

namespace {

using json = nlohmann::json;

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "/" + key, "missing required value");
  return j.at(key);
}

template <class T>
T get_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  }
}

std::vector<Profile1D> profiles_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty list of profiles");
  std::vector<Profile1D> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& v = j[k];
    if (v.is_string() && v.get<std::string>() == "x")
      out.push_back(Profile1D::linear(0.0, 1.0));
    else
      out.push_back(Profile1D::from_json(v, path + "/" + std::to_string(k)));
  }
  return out;
}

json profiles_to_json(const std::vector<Profile1D>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.to_json());
  return a;
}

MatrixModel model_of(const json& c) {
  std::vector<TransformStep> steps;
  const auto& t = c.at("transforms");
  for (std::size_t k = 0; k < t.size(); ++k) steps.push_back(TransformStep::from_json(t[k], "/transforms/" + std::to_string(k)));
  return MatrixModel(EnsembleSpec::from_json(c.at("ensemble"), "/ensemble"), steps);
}

VerifyOptions options_of(const json& c, int jobs) {
  VerifyOptions o;
  o.grid = NGrid::from_json(c.at("grid"), "/grid");
  o.tolerance = c.at("tolerance").get<double>();
  o.jobs = jobs;
  return o;
}

std::string cycle_text(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) return j.dump();
  throw ConfigError(path, "cycles must be \"2,2\" or a list of per-edge insertion lists");
}

CycleSpec cycles_of(const json& j, const std::string& path) {
  try {
    return CycleSpec::parse(cycle_text(j, path));
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  }
}

std::string partition_list(const std::vector<SetPartition>& ps) {
  std::string out;
  for (const auto& p : ps) out += (out.empty() ? "" : " ") + p.to_string();
  return out;
}

}  // namespace

const std::vector<std::string>& check_types() {
  static const std::vector<std::string> types{"enumerate",      "axiom_ii",    "axiom_iii", "axiom_iv",
                                              "trace_cumulant", "self_averaging", "proposition", "theory",
                                              "oracle",         "estimate"};
  return types;
}

ObservableSpec observable_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) throw ConfigError(path, "observable must be one of {cycles|traces|dressed: ...}");
  try {
    if (j.contains("cycles")) return ObservableSpec::entry_cycles(j.at("cycles").get<std::vector<std::vector<int>>>());
    if (j.contains("traces")) return ObservableSpec::trace_powers(j.at("traces").get<std::vector<int>>());
    if (j.contains("dressed")) return ObservableSpec::dressed_trace(profiles_from_json(j.at("dressed"), path + "/dressed"));
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "unknown observable '" + j.begin().key() + "'");
}

json claim_to_json(const ClaimVerdict& v) {
  auto list = [](const std::vector<SetPartition>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(p.to_string());
    return a;
  };
  return {{"spec", v.spec.to_string()},
          {"leading", v.leading ? json(*v.leading) : json("ZERO")},
          {"target", v.target},
          {"a_leading_matches", v.leading_matches},
          {"b_argmax_reachable", v.argmax_reachable},
          {"c_reachable_leading", v.reachable_leading},
          {"argmax", list(v.argmax)},
          {"unreachable_argmax", list(v.unreachable_argmax)},
          {"subleading_reachable", list(v.subleading_reachable)},
          {"reachable_count", v.reachable_count},
          {"start_count", v.start_count}};
}

// ---------------------------------------------------------------- config

json expand_check(const json& check, const ExperimentConfig& cfg, const std::string& path) {
  if (!check.is_object()) throw ConfigError(path, "check must be an object");
  const std::string type = get_as<std::string>(require(check, "type", path), path + "/type");
  if (std::find(check_types().begin(), check_types().end(), type) == check_types().end())
    throw ConfigError(path + "/type", "unknown check type '" + type + "'");

  json c = check;
  c["seed"] = check.contains("seed") ? get_as<std::uint64_t>(check.at("seed"), path + "/seed") : cfg.seed;
  c["tolerance"] = check.contains("tolerance") ? get_as<double>(check.at("tolerance"), path + "/tolerance") : cfg.tolerance;
  if (!(c["tolerance"].get<double>() >= 0)) throw ConfigError(path + "/tolerance", "tolerance must be nonnegative");

  json ens = check.contains("ensemble") ? check.at("ensemble") : cfg.ensemble;
  if (ens.is_object()) ens["seed"] = c["seed"];
  c["ensemble"] = EnsembleSpec::from_json(ens, path + "/ensemble").to_json();

  json steps = json::array();
  if (check.contains("transforms")) {
    const auto& t = check.at("transforms");
    if (!t.is_array()) throw ConfigError(path + "/transforms", "transforms must be a list");
    for (std::size_t k = 0; k < t.size(); ++k)
      steps.push_back(TransformStep::from_json(t[k], path + "/transforms/" + std::to_string(k)).to_json());
  }
  c["transforms"] = steps;
  c["grid"] = check.contains("grid") ? NGrid::from_json(check.at("grid"), path + "/grid").to_json() : cfg.grid.to_json();

  auto set_default = [&](const char* key, json value) {
    if (!c.contains(key)) c[key] = std::move(value);
  };
  if (type == "enumerate") {
    set_default("what", "nc");
    const auto what = get_as<std::string>(c["what"], path + "/what");
    if (what == "connecting") {
      set_default("gamma", json::array({2, 2}));
      get_as<std::vector<int>>(c["gamma"], path + "/gamma");
    } else if (what == "nc" || what == "all") {
      set_default("n", 4);
      get_as<int>(c["n"], path + "/n");
    } else {
      throw ConfigError(path + "/what", "expected nc, all or connecting");
    }
    set_default("expect", nullptr);
  } else if (type == "axiom_ii") {
    set_default("n", 2);
    const int n = get_as<int>(c["n"], path + "/n");
    if (n < 1 || n > 4) throw ConfigError(path + "/n", "n must lie in 1..4");
    set_default("pattern", default_pattern(n));
    get_as<std::vector<double>>(c["pattern"], path + "/pattern");
  } else if (type == "axiom_iv") {
    set_default("cycles", "2,2");
    c["cycles"] = cycles_of(c["cycles"], path + "/cycles").to_string();
  } else if (type == "trace_cumulant") {
    set_default("powers", json::array({2, 2}));
    get_as<std::vector<int>>(c["powers"], path + "/powers");
  } else if (type == "axiom_iii") {
    set_default("meshes", json::array({4, 8}));
    get_as<std::vector<int>>(c["meshes"], path + "/meshes");
  } else if (type == "self_averaging") {
    set_default("z", 0.1);
    get_as<double>(c["z"], path + "/z");
  } else if (type == "proposition") {
    c["transform"] = TransformStep::from_json(require(check, "transform", path), path + "/transform").to_json();
    set_default("checks", json::array({{{"type", "axiom_ii"}, {"n", 2}}, {{"type", "trace_cumulant"}, {"powers", {2, 2}}}}));
    json sub = json::array();
    for (std::size_t k = 0; k < c["checks"].size(); ++k)
      sub.push_back(ProposalCheck::from_json(c["checks"][k], path + "/checks/" + std::to_string(k)).to_json());
    c["checks"] = sub;
  } else if (type == "theory") {
    set_default("deltas", json::array({1, 1}));
    c["deltas"] = profiles_to_json(profiles_from_json(c["deltas"], path + "/deltas"));
    set_default("model", nullptr);
    if (!c["model"].is_null()) c["model"] = LocalFreeCumulantModel::from_json(c["model"], path + "/model").to_json();
    set_default("quadrature_points", 256);
    get_as<int>(c["quadrature_points"], path + "/quadrature_points");
  } else if (type == "oracle") {
    set_default("cycles", "2,2");
    c["cycles"] = cycles_of(c["cycles"], path + "/cycles").to_string();
    set_default("mode", "leading");
    const auto mode = get_as<std::string>(c["mode"], path + "/mode");
    if (mode != "leading" && mode != "claim" && mode != "entrywise")
      throw ConfigError(path + "/mode", "expected leading, claim or entrywise");
    set_default("cap", kDefaultOracleCap);
    get_as<int>(c["cap"], path + "/cap");
  } else if (type == "estimate") {
    observable_from_json(require(check, "observable", path), path + "/observable");
  }
  return c;
}

void ExperimentConfig::expand() {
  checks.clear();
  std::set<std::string> names;
  const json list = raw_.contains("checks") ? raw_.at("checks") : json::array();
  if (!list.is_array()) throw ConfigError("/checks", "checks must be a list");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string path = "/checks/" + std::to_string(k);
    json c = expand_check(list[k], *this, path);
    if (!c.contains("name")) c["name"] = c["type"].get<std::string>() + "-" + std::to_string(k + 1);
    const auto name = get_as<std::string>(c["name"], path + "/name");
    if (!names.insert(name).second) throw ConfigError(path + "/name", "duplicate check name '" + name + "'");
    checks.push_back(std::move(c));
  }
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  static const std::set<std::string> known{"seed", "out", "jobs", "tolerance", "ensemble", "grid", "checks", "version"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ConfigError("/" + key, "unknown config key");
  ExperimentConfig cfg;
  cfg.raw_ = j;
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j.at("seed"), "/seed");
  if (j.contains("out")) cfg.out = get_as<std::string>(j.at("out"), "/out");
  if (j.contains("jobs")) cfg.jobs = get_as<int>(j.at("jobs"), "/jobs");
  if (cfg.jobs < 1) throw ConfigError("/jobs", "jobs must be at least 1");
  if (j.contains("tolerance")) cfg.tolerance = get_as<double>(j.at("tolerance"), "/tolerance");
  if (!(cfg.tolerance >= 0)) throw ConfigError("/tolerance", "tolerance must be nonnegative");
  if (j.contains("ensemble")) cfg.ensemble = j.at("ensemble");
  EnsembleSpec::from_json(cfg.ensemble, "/ensemble");
  if (j.contains("grid")) cfg.grid = NGrid::from_json(j.at("grid"), "/grid");
  cfg.expand();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open config file '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON in '") + file + "': " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  return {{"version", kVersion}, {"seed", seed},  {"out", out},  {"jobs", jobs},
          {"tolerance", tolerance}, {"ensemble", ensemble}, {"grid", grid.to_json()}, {"checks", checks}};
}

void ExperimentConfig::override_seed(std::uint64_t s) {
  seed = s;
  raw_["seed"] = s;
  expand();
}

void ExperimentConfig::override_tolerance(double t) {
  if (!(t >= 0)) throw ConfigError("/tolerance", "tolerance must be nonnegative");
  tolerance = t;
  raw_["tolerance"] = t;
  expand();
}

// ---------------------------------------------------------------- checks

CheckReport run_check(const json& c, int jobs) {
  const auto start = std::chrono::steady_clock::now();
  const std::string type = c.at("type").get<std::string>();
  const MatrixModel model = model_of(c);
  const VerifyOptions opt = options_of(c, jobs);
  CheckReport r;

  if (type == "enumerate") {
    const auto what = c.at("what").get<std::string>();
    std::size_t count = 0;
    std::string label;
    if (what == "connecting") {
      const auto gamma = c.at("gamma").get<std::vector<int>>();
      count = connecting_partitions(IntervalPartition(gamma)).size();
      label = "connecting partitions of Gamma=" + json(gamma).dump();
    } else {
      const int n = c.at("n").get<int>();
      count = what == "nc" ? enumerate_noncrossing(n).size() : enumerate_partitions(n).size();
      label = (what == "nc" ? "NC(" : "P(") + std::to_string(n) + ")";
    }
    r.type = type;
    r.subject = label;
    r.details = {{"count", count}, {"what", what}};
    if (!c.at("expect").is_null()) {
      r.details["expect"] = c.at("expect");
      if (c.at("expect").get<std::size_t>() != count) r.verdict = Verdict::Fail;
    }
  } else if (type == "axiom_ii") {
    r = verify_axiom_ii(model, c.at("n").get<int>(), c.at("pattern").get<std::vector<double>>(), opt);
  } else if (type == "axiom_iv") {
    r = verify_axiom_iv(model, CycleSpec::parse(c.at("cycles").get<std::string>()), opt);
  } else if (type == "trace_cumulant") {
    r = verify_trace_cumulant(model, c.at("powers").get<std::vector<int>>(), opt);
  } else if (type == "axiom_iii") {
    r = verify_axiom_iii(model, {c.at("meshes").get<std::vector<int>>()}, opt);
  } else if (type == "self_averaging") {
    r = verify_self_averaging(model, c.at("z").get<double>(), opt);
  } else if (type == "proposition") {
    std::vector<ProposalCheck> sub;
    for (const auto& s : c.at("checks")) sub.push_back(ProposalCheck::from_json(s));
    const auto step = TransformStep::from_json(c.at("transform"));
    r.type = type;
    r.subject = model.then(step).describe();
    r.seed = model.ensemble().seed;
    r.tolerance = opt.tolerance;
    r.grid = opt.grid;
    r.parts = verify_proposition(model, step, sub, opt);
    for (auto& p : r.parts) {
      p.name = p.details.at("role").get<std::string>() + ":" + p.type;
      r.verdict = worst(r.verdict, p.verdict);
      r.rows.insert(r.rows.end(), p.rows.begin(), p.rows.end());
    }
    r.details["transform"] = step.to_json();
  } else if (type == "theory") {
    const auto deltas = profiles_from_json(c.at("deltas"), "/deltas");
    const auto g = c.at("model").is_null() ? LocalFreeCumulantModel::for_model(model)
                                           : LocalFreeCumulantModel::from_json(c.at("model"));
    QuadratureOptions q;
    q.points = c.at("quadrature_points").get<int>();
    r = compare_theory_vs_mc(model, g, deltas, opt, q);
  } else if (type == "oracle") {
    const auto cs = CycleSpec::parse(c.at("cycles").get<std::string>());
    const auto mode = c.at("mode").get<std::string>();
    const int cap = c.at("cap").get<int>();
    r.type = type;
    r.subject = cs.to_string();
    r.target = cs.target_exponent();
    if (mode == "claim") {
      const auto v = claim_check(cs, cap);
      r.details = claim_to_json(v);
      r.verdict = v.leading_matches && v.argmax_reachable ? Verdict::Pass : Verdict::Fail;
      if (!v.argmax_reachable)
        r.notes.push_back("leading partitions unreachable by moves: " + partition_list(v.unreachable_argmax));
      if (!v.reachable_leading)
        r.notes.push_back("finding: reachable partitions below the leading order: " +
                          partition_list(v.subleading_reachable));
    } else if (mode == "entrywise") {
      const auto e = entrywise_oracle(cs, cap);
      r.target = e.target;
      json am = json::array();
      for (const auto& p : e.argmax) am.push_back(p.to_string());
      r.details = {{"exponent", e.exponent ? json(*e.exponent) : json("ZERO")},
                   {"target", e.target},
                   {"long_small_loop", e.long_small_loop.to_string()},
                   {"long_small_loop_leading", e.long_small_loop_leading},
                   {"argmax", am}};
      r.verdict = e.matches ? Verdict::Pass : Verdict::Fail;
    } else {
      const auto lead = leading_exponent(cs, cap);
      json am = json::array();
      for (const auto& p : lead.argmax) am.push_back(p.to_string());
      r.details = {{"exponent", lead.exponent ? json(*lead.exponent) : json("ZERO")},
                   {"target", cs.target_exponent()},
                   {"connecting_count", lead.connecting_count},
                   {"argmax", am}};
      r.verdict = lead.exponent == cs.target_exponent() ? Verdict::Pass : Verdict::Fail;
    }
    r.details["mode"] = mode;
  } else if (type == "estimate") {
    const auto o = observable_from_json(c.at("observable"), "/observable");
    r.type = type;
    r.subject = model.describe();
    r.grid = opt.grid;
    for (int N : opt.grid.sizes) {
      const MatrixModel sized = model.with_size(N);
      const auto e = estimate_cumulant(sized, o, {opt.grid.samples, 0, jobs});
      r.points.push_back({N, e.value.real(), e.std_error});
      r.rows.push_back(make_row(sized, o, e));
    }
    r.details["observable"] = o.describe();
  }
  r.name = c.at("name").get<std::string>();
  r.seed = c.at("seed").get<std::uint64_t>();
  if (!r.tolerance && type != "enumerate" && type != "oracle" && type != "estimate") r.tolerance = opt.tolerance;
  r.details["params"] = c;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------- report

int RunReport::exit_code() const {
  for (const auto& c : checks)
    if (c.verdict == Verdict::Fail) return 2;
  return 0;
}

json RunReport::to_json() const {
  json cs = json::array();
  std::map<std::string, int> summary{{"PASS", 0}, {"FAIL", 0}, {"BOUNDED", 0}};
  for (const auto& c : checks) {
    cs.push_back(c.to_json());
    summary[to_string(c.verdict)]++;
  }
  return {{"version", kVersion},
          {"config", config},
          {"jobs", jobs},
          {"checks", cs},
          {"summary", summary},
          {"exit_code", exit_code()},
          {"files", {"report.json", "raw_estimates.csv", "plot.csv"}},
          {"wall_seconds", wall_seconds}};
}

std::string RunReport::raw_csv() const {
  std::string out = EstimateRow::csv_header() + "\n";
  for (const auto& c : checks)
    for (const auto& row : c.rows) out += row.csv() + "\n";
  return out;
}

std::string RunReport::plot_csv() const {
  std::string out = "check,N,value,error,fit\n";
  auto emit = [&](const std::string& name, const CheckReport& c) {
    for (const auto& p : c.points) {
      std::string fit;
      if (c.fit && !c.fit->indistinguishable_from_zero && c.fit->sign_consistent) {
        double v = std::exp(c.fit->log_prefactor) * std::pow(static_cast<double>(p.N), c.fit->exponent);
        if (p.value < 0) v = -v;
        fit = format_double(v);
      }
      out += csv_field(name) + "," + std::to_string(p.N) + "," + format_double(p.value) + "," +
             format_double(p.error) + "," + fit + "\n";
    }
  };
  for (const auto& c : checks) {
    emit(c.name, c);
    for (const auto& p : c.parts) emit(c.name + "/" + p.name, p);
  }
  return out;
}

std::string RunReport::table() const { return render_report_table(to_json()); }

namespace {

std::string number_or_dash(const json& v, int precision = 3) {
  if (v.is_null()) return "-";
  if (!v.is_number()) return v.dump();
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v.get<double>();
  return os.str();
}

void table_rows(const json& check, const std::string& prefix, std::vector<std::vector<std::string>>& rows) {
  std::string fitted = number_or_dash(check.value("fitted", json()));
  if (!check.value("error", json()).is_null()) fitted += " +- " + number_or_dash(check["error"]);
  std::string info;
  const auto& d = check.value("details", json::object());
  if (d.contains("count")) info = "count " + d["count"].dump();
  if (d.contains("theory")) info = "theory " + number_or_dash(d["theory"], 6) + " mc " + number_or_dash(d["mc"], 6);
  if (check.value("type", "") == "oracle" && d.contains("exponent")) info = "exponent " + d["exponent"].dump();
  if (check.value("type", "") == "oracle" && d.contains("leading")) info = "leading " + d["leading"].dump();
  if (d.contains("meshes")) {
    for (const auto& m : d["meshes"]) info += "jump@" + m["mesh"].dump() + " " + number_or_dash(m["max_significant_jump"]) + " ";
  }
  const auto& fit = check.value("fit", json());
  if (fit.is_object() && fit.value("indistinguishable_from_zero", false))
    info = "zero; bound exponent " + number_or_dash(fit["bound_exponent"]);
  rows.push_back({prefix + check.value("name", ""), check.value("type", ""), check.value("verdict", ""),
                  number_or_dash(check.value("target_exponent", json()), 1), fitted, info});
  for (const auto& p : check.value("parts", json::array())) table_rows(p, "  ", rows);
}

}  // namespace

std::string render_report_table(const json& report) {
  std::vector<std::vector<std::string>> rows{{"check", "type", "verdict", "target", "fitted", "info"}};
  for (const auto& c : report.at("checks")) table_rows(c, "", rows);
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
  std::ostringstream os;
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      os << r[k];
      if (k + 1 < r.size()) os << std::string(width[k] - r[k].size() + 2, ' ');
    }
    os << '\n';
  }
  if (report.contains("summary")) {
    const auto& s = report["summary"];
    os << "PASS " << s.value("PASS", 0) << "  BOUNDED " << s.value("BOUNDED", 0) << "  FAIL " << s.value("FAIL", 0)
       << '\n';
  }
  return os.str();
}

std::string render_report_csv(const json& report) {
  std::string out = "check,type,target,fitted,error,verdict\n";
  std::function<void(const json&, const std::string&)> emit = [&](const json& c, const std::string& prefix) {
    auto num = [](const json& v) { return v.is_number() ? format_double(v.get<double>()) : std::string(); };
    out += csv_field(prefix + c.value("name", "")) + "," + c.value("type", "") + "," +
           num(c.value("target_exponent", json())) + "," + num(c.value("fitted", json())) + "," +
           num(c.value("error", json())) + "," + c.value("verdict", "") + "\n";
    for (const auto& p : c.value("parts", json::array())) emit(p, prefix + c.value("name", "") + "/");
  };
  for (const auto& c : report.at("checks")) emit(c, "");
  return out;
}

RunReport run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg.to_json();
  report.jobs = cfg.jobs;
  for (const auto& c : cfg.checks) {
    if (log) *log << "[" << c.at("name").get<std::string>() << "] running " << c.at("type").get<std::string>() << std::endl;
    report.checks.push_back(run_check(c, cfg.jobs));
    if (log)
      *log << "[" << report.checks.back().name << "] " << to_string(report.checks.back().verdict) << " ("
           << std::fixed << std::setprecision(1) << report.checks.back().wall_seconds << " s)" << std::endl;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_outputs(const RunReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (std::filesystem::path(dir) / name).string());
    out << text;
  };
  write("report.json", report.to_json().dump(2) + "\n");
  write("raw_estimates.csv", report.raw_csv());
  write("plot.csv", report.plot_csv());
}

}  // namespace sre
