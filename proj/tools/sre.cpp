// sre: command-line front end for structured random-matrix experiments.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sre/errors.hpp"
#include "sre/oracle.hpp"
#include "sre/partition.hpp"
#include "sre/runner.hpp"
#include "sre/theory.hpp"

namespace {

using json = nlohmann::json;
using namespace sre;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
  std::optional<double> tolerance;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

std::vector<int> int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what, "cannot parse integer '" + item + "'");
    }
  }
  return out;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what, e.what());
  }
}

/// "gue", "band_wigner", ... or a JSON object.
json ensemble_json(const std::string& text, const std::string& profile, std::optional<int> N) {
  json e = !text.empty() && text.front() == '{' ? parse_json(text, "--ensemble") : json{{"kind", text}};
  if (!profile.empty()) e["profile"] = parse_json(profile, "--profile");
  if (N) e["N"] = *N;
  return e;
}

/// Comma list of numbers and "x", or a JSON list of profiles.
json profile_list(const std::string& text) {
  if (!text.empty() && text.front() == '[') return parse_json(text, "--deltas");
  json out = json::array();
  for (const auto& item : split(text, ',')) {
    if (item == "x") {
      out.push_back(item);
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--deltas", "expected a number or x, got '" + item + "'");
    }
  }
  return out;
}

json base_config(const Globals& g) {
  json j = json::object();
  if (!g.config.empty()) {
    std::ifstream in(g.config);
    if (!in) throw ConfigError("", "cannot open config file '" + g.config + "'");
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("invalid JSON in '") + g.config + "': " + e.what());
    }
  }
  return j;
}

ExperimentConfig finish(json j, const Globals& g) {
  if (g.jobs) j["jobs"] = *g.jobs;
  auto cfg = ExperimentConfig::from_json(j);
  if (g.seed) cfg.override_seed(*g.seed);
  if (g.tolerance) cfg.override_tolerance(*g.tolerance);
  if (!g.out.empty()) cfg.out = g.out;
  return cfg;
}

int run_and_print(const ExperimentConfig& cfg, bool write) {
  auto report = run_experiment(cfg, &std::cerr);
  std::cout << report.table();
  if (write) {
    write_outputs(report, cfg.out);
    std::cerr << "outputs written to " << cfg.out << "\n";
  }
  for (const auto& c : report.checks)
    if (c.verdict == Verdict::Fail) std::cerr << "FAIL: " << c.name << "\n";
  return report.exit_code();
}

std::string exponent_text(const Exponent& e) { return e ? std::to_string(*e) : "ZERO"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured random-matrix ensembles: scaling oracle, Monte Carlo checks and theory."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Experiment config (JSON)")->envname("SRE_CONFIG");
  app.add_option("--seed", g.seed, "Global seed override")->envname("SRE_SEED");
  app.add_option("--out", g.out, "Output directory")->envname("SRE_OUT");
  app.add_option("--jobs", g.jobs, "Worker threads per check")->envname("SRE_JOBS")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", g.tolerance, "Exponent tolerance override")->envname("SRE_TOLERANCE")
      ->check(CLI::NonNegativeNumber);

  // run
  auto* run = app.add_subcommand("run", "Run every check of a config; writes report.json and CSVs");
  std::string run_config;
  run->add_option("config", run_config, "Config path (alternative to --config)");

  // enumerate
  auto* en = app.add_subcommand("enumerate", "List set partitions");
  std::optional<int> en_nc, en_all;
  std::string en_conn;
  bool en_count = false;
  auto* o_nc = en->add_option("--nc", en_nc, "Non-crossing partitions of n");
  auto* o_all = en->add_option("--all", en_all, "All partitions of k");
  auto* o_conn = en->add_option("--connecting", en_conn, "Connecting partitions of Gamma, e.g. 2,2");
  o_nc->excludes(o_all)->excludes(o_conn);
  o_all->excludes(o_conn);
  en->add_flag("--count", en_count, "Print only the count");

  // estimate
  auto* est = app.add_subcommand("estimate", "Monte Carlo cumulant estimate");
  std::string est_ens = "gue", est_profile, est_obs, est_traces, est_cycles;
  std::vector<std::string> est_transforms;
  int est_N = 64;
  std::size_t est_samples = 10000;
  est->add_option("--ensemble", est_ens, "Kind name or JSON object");
  est->add_option("--profile", est_profile, "Ensemble profile (JSON)");
  est->add_option("--N", est_N, "Matrix size")->check(CLI::Range(2, 1 << 14));
  est->add_option("--samples", est_samples, "Samples")->check(CLI::Range(2, 1 << 30));
  est->add_option("--transform", est_transforms, "Transform step (JSON), repeatable");
  auto* o_obs = est->add_option("--observable", est_obs, "Observable JSON: {cycles|traces|dressed: ...}");
  auto* o_tr = est->add_option("--traces", est_traces, "Trace powers, e.g. 2,2");
  auto* o_cy = est->add_option("--cycles", est_cycles, "Index cycles (JSON), e.g. [[1,2],[3,4]]");
  o_obs->excludes(o_tr)->excludes(o_cy);
  o_tr->excludes(o_cy);

  // verify
  auto* ver = app.add_subcommand("verify", "Run one verification check");
  std::string v_check, v_ens, v_profile, v_cycles, v_powers, v_pattern, v_meshes, v_sizes, v_transform, v_checks;
  std::vector<std::string> v_transforms;
  std::optional<int> v_n;
  std::optional<double> v_z;
  std::optional<std::size_t> v_samples;
  ver->add_option("--check", v_check, "axiom-ii | axiom-iii | axiom-iv | trace-cumulant | self-averaging | proposition")
      ->required()
      ->check(CLI::IsMember({"axiom-ii", "axiom-iii", "axiom-iv", "trace-cumulant", "self-averaging", "proposition"}));
  ver->add_option("--ensemble", v_ens, "Kind name or JSON object");
  ver->add_option("--profile", v_profile, "Ensemble profile (JSON)");
  ver->add_option("--transform-first", v_transforms, "Transform applied before the check (JSON), repeatable");
  ver->add_option("--n", v_n, "Cumulant order (axiom-ii)");
  ver->add_option("--pattern", v_pattern, "Index pattern x_1,..,x_n (axiom-ii)");
  ver->add_option("--cycles", v_cycles, "Cycle spec, e.g. 2,2 (axiom-iv)");
  ver->add_option("--powers", v_powers, "Trace powers, e.g. 2,2 (trace-cumulant)");
  ver->add_option("--meshes", v_meshes, "Continuity meshes, e.g. 4,8 (axiom-iii)");
  ver->add_option("--z", v_z, "Exponent parameter (self-averaging)");
  ver->add_option("--transform", v_transform, "Transform under test (JSON, proposition)");
  ver->add_option("--checks", v_checks, "Checks rerun by proposition (JSON list)");
  ver->add_option("--sizes", v_sizes, "Grid sizes, e.g. 32,64,128");
  ver->add_option("--samples", v_samples, "Samples per size")->check(CLI::Range(2, 1 << 30));

  // oracle
  auto* orc = app.add_subcommand("oracle", "Symbolic N-scaling of cumulants of cycles");
  std::string o_cycles;
  bool o_claim = false, o_entry = false, o_dump = false, o_json = false;
  int o_cap = kDefaultOracleCap;
  orc->add_option("--cycles", o_cycles, "Cycle lengths 2,2 or per-edge insertions [[0,1],[2]]")->required();
  auto* f_claim = orc->add_flag("--claim", o_claim, "Check the moves claim (JSON verdict)");
  auto* f_entry = orc->add_flag("--entrywise", o_entry, "Entrywise |M|^2 insertions");
  f_claim->excludes(f_entry);
  orc->add_flag("--dump-csv", o_dump, "Exponent of every connecting partition as CSV");
  orc->add_flag("--json", o_json, "JSON output");
  orc->add_option("--cap", o_cap, "Largest k enumerated")->check(CLI::Range(1, 12));

  // theory
  auto* th = app.add_subcommand("theory", "Trace expectation from local free cumulants");
  std::string t_ens = "gue", t_profile, t_model, t_deltas = "1,1", t_sizes;
  int t_points = 256;
  bool t_csv = false, t_json = false, t_compare = false;
  std::optional<std::size_t> t_samples;
  th->add_option("--ensemble", t_ens, "Kind name or JSON object (built-in g model)");
  th->add_option("--profile", t_profile, "Ensemble profile (JSON)");
  th->add_option("--model", t_model, "Local free cumulant model (JSON or file)");
  th->add_option("--deltas", t_deltas, "Delta_1..Delta_n, e.g. 1,x,1,x");
  th->add_option("--points", t_points, "Quadrature points per variable")->check(CLI::Range(2, 1 << 16));
  th->add_flag("--csv", t_csv, "Per-partition breakdown CSV");
  th->add_flag("--json", t_json, "JSON output");
  th->add_flag("--compare", t_compare, "Compare with Monte Carlo");
  th->add_option("--sizes", t_sizes, "Grid sizes for --compare");
  th->add_option("--samples", t_samples, "Samples per size for --compare")->check(CLI::Range(2, 1 << 30));

  // report
  auto* rep = app.add_subcommand("report", "Render a previous run");
  std::string r_from;
  bool r_csv = false;
  rep->add_option("from", r_from, "Output directory or report.json")->required();
  rep->add_flag("--csv", r_csv, "Exponent vs target CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (run->parsed()) {
      if (!run_config.empty()) g.config = run_config;
      if (g.config.empty()) throw ConfigError("", "run needs a config path");
      return run_and_print(finish(base_config(g), g), true);
    }

    if (en->parsed()) {
      std::vector<SetPartition> ps;
      if (en_nc)
        ps = enumerate_noncrossing(*en_nc);
      else if (en_all)
        ps = enumerate_partitions(*en_all);
      else if (!en_conn.empty())
        ps = connecting_partitions(IntervalPartition(int_list(en_conn, "--connecting")));
      else
        throw ConfigError("", "enumerate needs --nc, --all or --connecting");
      if (en_count)
        std::cout << ps.size() << "\n";
      else
        write_partitions(std::cout, ps);
      return 0;
    }

    if (est->parsed()) {
      json j = base_config(g);
      const std::uint64_t seed = g.seed ? *g.seed : j.value("seed", std::uint64_t{1});
      json e = ensemble_json(est_ens, est_profile, est_N);
      e["seed"] = seed;
      std::vector<TransformStep> steps;
      for (std::size_t k = 0; k < est_transforms.size(); ++k)
        steps.push_back(TransformStep::from_json(parse_json(est_transforms[k], "--transform"),
                                                 "--transform/" + std::to_string(k)));
      const MatrixModel model(EnsembleSpec::from_json(e, "--ensemble"), steps);
      json obs;
      if (!est_obs.empty())
        obs = parse_json(est_obs, "--observable");
      else if (!est_cycles.empty())
        obs = {{"cycles", parse_json(est_cycles, "--cycles")}};
      else
        obs = {{"traces", int_list(est_traces.empty() ? "1,1" : est_traces, "--traces")}};
      const auto o = observable_from_json(obs, "--observable");
      const auto r = estimate_cumulant(model, o, {est_samples, 0, g.jobs.value_or(1)});
      std::cout << EstimateRow::csv_header() << "\n" << make_row(model, o, r).csv() << "\n";
      return 0;
    }

    if (ver->parsed()) {
      json j = base_config(g);
      std::string type = v_check;
      std::replace(type.begin(), type.end(), '-', '_');
      json c = {{"type", type}, {"name", v_check}};
      if (!v_ens.empty() || !v_profile.empty())
        c["ensemble"] = ensemble_json(v_ens.empty() ? "gue" : v_ens, v_profile, std::nullopt);
      if (!v_transforms.empty()) {
        c["transforms"] = json::array();
        for (const auto& t : v_transforms) c["transforms"].push_back(parse_json(t, "--transform-first"));
      }
      if (v_n) c["n"] = *v_n;
      if (!v_pattern.empty()) c["pattern"] = profile_list(v_pattern);
      if (!v_cycles.empty()) c["cycles"] = v_cycles;
      if (!v_powers.empty()) c["powers"] = int_list(v_powers, "--powers");
      if (!v_meshes.empty()) c["meshes"] = int_list(v_meshes, "--meshes");
      if (v_z) c["z"] = *v_z;
      if (!v_transform.empty()) c["transform"] = parse_json(v_transform, "--transform");
      if (!v_checks.empty()) c["checks"] = parse_json(v_checks, "--checks");
      if (!v_sizes.empty() || v_samples) {
        json grid = j.value("grid", NGrid{}.to_json());
        if (!v_sizes.empty()) grid["sizes"] = int_list(v_sizes, "--sizes");
        if (v_samples) grid["samples"] = *v_samples;
        c["grid"] = grid;
      }
      j["checks"] = json::array({c});
      return run_and_print(finish(j, g), !g.out.empty());
    }

    if (orc->parsed()) {
      CycleSpec cs = CycleSpec::from_lengths({2});
      try {
        cs = CycleSpec::parse(o_cycles);
      } catch (const std::exception& e) {
        throw ConfigError("--cycles", e.what());
      }
      if (o_dump) {
        const auto graph = o_entry ? entrywise_graph(cs) : power_insertion_graph(cs);
        std::cout << "partition,exponent\n";
        for (const auto& pe : all_connecting_exponents(graph, o_cap))
          std::cout << csv_field(pe.partition.to_string()) << "," << exponent_text(pe.exponent) << "\n";
        return 0;
      }
      if (o_claim) {
        const auto v = claim_check(cs, o_cap);
        std::cout << claim_to_json(v).dump(2) << "\n";
        return v.leading_matches && v.argmax_reachable ? 0 : 2;
      }
      if (o_entry) {
        const auto e = entrywise_oracle(cs, o_cap);
        if (o_json) {
          json a = json::array();
          for (const auto& p : e.argmax) a.push_back(p.to_string());
          std::cout << json{{"spec", cs.to_string()}, {"exponent", e.exponent ? json(*e.exponent) : json("ZERO")},
                            {"target", e.target}, {"matches", e.matches}, {"argmax", a}}
                           .dump(2)
                    << "\n";
        } else {
          std::cout << "spec " << cs.to_string() << "\nentrywise exponent " << exponent_text(e.exponent)
                    << "\ntarget " << e.target << "\n";
        }
        return e.matches ? 0 : 2;
      }
      const auto lead = leading_exponent(cs, o_cap);
      if (o_json) {
        json a = json::array();
        for (const auto& p : lead.argmax) a.push_back(p.to_string());
        std::cout << json{{"spec", cs.to_string()}, {"exponent", lead.exponent ? json(*lead.exponent) : json("ZERO")},
                          {"target", cs.target_exponent()}, {"connecting_count", lead.connecting_count},
                          {"argmax", a}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "spec " << cs.to_string() << "\nleading exponent " << exponent_text(lead.exponent) << "\ntarget "
                  << cs.target_exponent() << "\nconnecting partitions " << lead.connecting_count << "\nargmax";
        for (const auto& p : lead.argmax) std::cout << " " << p;
        std::cout << "\n";
      }
      return lead.exponent == cs.target_exponent() ? 0 : 2;
    }

    if (th->parsed()) {
      const json deltas = profile_list(t_deltas);
      json model = nullptr;
      if (!t_model.empty()) {
        if (t_model.front() == '{') {
          model = parse_json(t_model, "--model");
        } else {
          std::ifstream in(t_model);
          if (!in) throw ConfigError("--model", "cannot open '" + t_model + "'");
          model = parse_json(std::string(std::istreambuf_iterator<char>(in), {}), "--model");
        }
      }
      json ens = ensemble_json(t_ens, t_profile, std::nullopt);
      if (t_compare) {
        json j = base_config(g);
        json c = {{"type", "theory"}, {"name", "theory"}, {"ensemble", ens}, {"deltas", deltas},
                  {"model", model}, {"quadrature_points", t_points}};
        if (!t_sizes.empty() || t_samples) {
          json grid = j.value("grid", NGrid{}.to_json());
          if (!t_sizes.empty()) grid["sizes"] = int_list(t_sizes, "--sizes");
          if (t_samples) grid["samples"] = *t_samples;
          c["grid"] = grid;
        }
        j["checks"] = json::array({c});
        return run_and_print(finish(j, g), !g.out.empty());
      }
      const auto gm = model.is_null() ? LocalFreeCumulantModel::for_ensemble(EnsembleSpec::from_json(ens, "--ensemble"))
                                      : LocalFreeCumulantModel::from_json(model, "--model");
      std::vector<Profile1D> ds;
      for (std::size_t k = 0; k < deltas.size(); ++k)
        ds.push_back(deltas[k].is_string() && deltas[k] == "x"
                         ? Profile1D::linear(0.0, 1.0)
                         : Profile1D::from_json(deltas[k], "--deltas/" + std::to_string(k)));
      QuadratureOptions q;
      q.points = t_points;
      const auto tn = theory_trace_expectation(gm, ds, q);
      for (const auto& w : tn.warnings) std::cerr << w << "\n";
      if (t_json) {
        std::cout << tn.to_json().dump(2) << "\n";
      } else if (t_csv) {
        std::cout << TnEvaluation::csv_header() << "\n";
        for (const auto& row : tn.csv_rows()) std::cout << row << "\n";
      } else {
        std::cout << "model " << gm.source << "\nn " << tn.n << "\nvalue " << format_double(tn.value)
                  << "\nquad_error " << format_double(tn.quad_error) << "\n";
      }
      return 0;
    }

    if (rep->parsed()) {
      std::filesystem::path p(r_from);
      if (std::filesystem::is_directory(p)) p /= "report.json";
      std::ifstream in(p);
      if (!in) throw ConfigError("", "cannot open '" + p.string() + "'");
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid report JSON: ") + e.what());
      }
      std::cout << (r_csv ? render_report_csv(j) : render_report_table(j));
      return j.value("exit_code", 0);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
