#include "sre/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sre/errors.hpp"

namespace sre {

// ---------------------------------------------------------------- g_n

LocalCumulant LocalCumulant::exact_zero(int n) {
  if (n < 1) throw PreconditionError("cumulant order must be at least 1");
  LocalCumulant g;
  g.n_ = n;
  return g;
}

LocalCumulant LocalCumulant::constant(int n, double c) {
  LocalCumulant g = exact_zero(n);
  g.kind_ = Kind::Constant;
  g.c_ = c;
  return g;
}

LocalCumulant LocalCumulant::of_profile(const Profile1D& p) {
  if (p.is_constant()) return constant(1, p(0.0));
  LocalCumulant g = exact_zero(1);
  g.kind_ = Kind::Profile1;
  g.p1_ = p;
  return g;
}

LocalCumulant LocalCumulant::of_profile(const Profile2D& p) {
  if (p.is_constant()) return constant(2, p(0.0, 0.0));
  LocalCumulant g = exact_zero(2);
  g.kind_ = Kind::Profile2;
  g.p2_ = p;
  return g;
}

LocalCumulant LocalCumulant::tabulated(int n, int size, std::vector<double> values) {
  if (n < 1 || n > 8) throw PreconditionError("tabulated g_n needs 1 <= n <= 8");
  if (size < 2) throw PreconditionError("tabulated g_n needs at least 2 points per axis");
  std::size_t expect = 1;
  for (int k = 0; k < n; ++k) expect *= static_cast<std::size_t>(size);
  if (values.size() != expect)
    throw PreconditionError("tabulated g_" + std::to_string(n) + " needs " + std::to_string(expect) + " values");
  for (double v : values)
    if (!std::isfinite(v)) throw PreconditionError("tabulated g_n values must be finite");
  LocalCumulant g = exact_zero(n);
  g.kind_ = Kind::Tabulated;
  g.size_ = size;
  g.table_ = std::move(values);
  return g;
}

LocalCumulant LocalCumulant::from_json(int n, const nlohmann::json& j, const std::string& path) {
  try {
    if (j.is_number()) return constant(n, j.get<double>());
    if (j.is_string() && j.get<std::string>() == "zero") return exact_zero(n);
    if (j.is_object() && j.value("type", "") == "tabulated")
      return tabulated(n, j.at("size").get<int>(), j.at("values").get<std::vector<double>>());
    if (n == 1) return of_profile(Profile1D::from_json(j, path));
    if (n == 2) return of_profile(Profile2D::from_json(j, path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path, e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "g_" + std::to_string(n) + " must be a number, \"zero\" or a tabulated grid");
}

nlohmann::json LocalCumulant::to_json() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Constant: return c_;
    case Kind::Profile1: return p1_.to_json();
    case Kind::Profile2: return p2_.to_json();
    case Kind::Tabulated: return {{"type", "tabulated"}, {"size", size_}, {"values", table_}};
  }
  return {};
}

double LocalCumulant::operator()(const double* x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return c_;
    case Kind::Profile1: return p1_(x[0]);
    case Kind::Profile2: return p2_(x[0], x[1]);
    case Kind::Tabulated: {
      int base[8];
      double frac[8];
      for (int k = 0; k < n_; ++k) {
        const double t = std::clamp(x[k], 0.0, 1.0) * (size_ - 1);
        base[k] = std::min(static_cast<int>(t), size_ - 2);
        frac[k] = t - base[k];
      }
      double sum = 0.0;
      for (unsigned corner = 0; corner < (1u << n_); ++corner) {
        double w = 1.0;
        std::size_t idx = 0;
        for (int k = 0; k < n_; ++k) {
          const bool up = corner >> k & 1u;
          w *= up ? frac[k] : 1.0 - frac[k];
          idx = idx * static_cast<std::size_t>(size_) + static_cast<std::size_t>(base[k] + (up ? 1 : 0));
        }
        if (w != 0.0) sum += w * table_[idx];
      }
      return sum;
    }
  }
  return 0.0;
}

std::string LocalCumulant::describe() const {
  std::ostringstream os;
  os << "g" << n_ << "=";
  switch (kind_) {
    case Kind::Zero: os << "0 (exact)"; break;
    case Kind::Constant: os << c_; break;
    case Kind::Profile1: os << p1_.describe(); break;
    case Kind::Profile2: os << p2_.describe(); break;
    case Kind::Tabulated: os << "tabulated(" << size_ << "^" << n_ << ")"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------- free cumulants

std::vector<double> free_moments(const std::vector<double>& kappa) {
  const int n_max = static_cast<int>(kappa.size());
  std::vector<double> m(kappa.size());
  for (int n = 1; n <= n_max; ++n) {
    CompensatedSum sum;
    for_each_noncrossing(n, [&](const SetPartition& p) {
      double prod = 1.0;
      for (int s : p.block_sizes()) prod *= kappa[s - 1];
      sum.add(prod);
      return true;
    });
    m[n - 1] = sum.value();
  }
  return m;
}

std::vector<double> free_cumulants(const std::vector<double>& moments) {
  const int n_max = static_cast<int>(moments.size());
  std::vector<double> kappa(moments.size());
  for (int n = 1; n <= n_max; ++n) {
    CompensatedSum rest;
    for_each_noncrossing(n, [&](const SetPartition& p) {
      if (p.is_coarsest()) return true;
      double prod = 1.0;
      for (int s : p.block_sizes()) prod *= kappa[s - 1];
      rest.add(prod);
      return true;
    });
    kappa[n - 1] = moments[n - 1] - rest.value();
  }
  return kappa;
}

std::vector<double> spectral_moments(const Profile1D& lambda, int n_max, int points) {
  std::vector<CompensatedSum> sums(n_max);
  for (int k = 0; k < points; ++k) {
    const double v = lambda((k + 0.5) / points);
    double p = 1.0;
    for (int n = 0; n < n_max; ++n) {
      p *= v;
      sums[n].add(p);
    }
  }
  std::vector<double> m;
  for (auto& s : sums) m.push_back(s.value() / points);
  return m;
}

// ---------------------------------------------------------------- models

LocalFreeCumulantModel LocalFreeCumulantModel::for_ensemble(const EnsembleSpec& spec, int n_max) {
  LocalFreeCumulantModel m;
  m.source = spec.name();
  switch (spec.kind) {
    case EnsembleKind::GUE:
    case EnsembleKind::BandWigner:
      m.g[1] = LocalCumulant::exact_zero(1);
      m.g[2] = spec.kind == EnsembleKind::GUE ? LocalCumulant::constant(2, 1.0) : LocalCumulant::of_profile(spec.sigma);
      for (int n = 3; n <= n_max; ++n) m.g[n] = LocalCumulant::exact_zero(n);
      break;
    case EnsembleKind::UnitarilyInvariant:
    case EnsembleKind::OrthogonallyInvariant: {
      const auto kappa = free_cumulants(spectral_moments(spec.spectrum, n_max));
      for (int n = 1; n <= n_max; ++n) {
        // Cancellation leaves round-off where a free cumulant vanishes.
        const double k = std::abs(kappa[n - 1]) < 1e-12 ? 0.0 : kappa[n - 1];
        m.g[n] = LocalCumulant::constant(n, k);
      }
      break;
    }
    case EnsembleKind::Deterministic:
      m.g[1] = LocalCumulant::of_profile(spec.spectrum);
      for (int n = 2; n <= n_max; ++n) m.g[n] = LocalCumulant::exact_zero(n);
      break;
  }
  return m;
}

LocalFreeCumulantModel LocalFreeCumulantModel::for_model(const MatrixModel& model, int n_max) {
  if (model.steps().empty()) return for_ensemble(model.ensemble(), n_max);
  LocalFreeCumulantModel m;
  m.source = model.describe();
  return m;
}

LocalFreeCumulantModel LocalFreeCumulantModel::from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("g")) throw ConfigError(path, "cumulant model needs a \"g\" object");
  LocalFreeCumulantModel m;
  m.source = j.value("source", "config");
  for (const auto& [key, value] : j.at("g").items()) {
    int n = 0;
    try {
      n = std::stoi(key);
    } catch (const std::exception&) {
      throw ConfigError(path + "/g/" + key, "order keys must be integers");
    }
    if (n < 1 || n > 8) throw ConfigError(path + "/g/" + key, "order must lie in 1..8");
    m.g[n] = LocalCumulant::from_json(n, value, path + "/g/" + key);
  }
  return m;
}

nlohmann::json LocalFreeCumulantModel::to_json() const {
  nlohmann::json gj = nlohmann::json::object();
  for (const auto& [n, c] : g) gj[std::to_string(n)] = c.to_json();
  return {{"source", source}, {"g", gj}};
}

const LocalCumulant* LocalFreeCumulantModel::find(int n) const {
  auto it = g.find(n);
  return it == g.end() ? nullptr : &it->second;
}

std::vector<std::string> LocalFreeCumulantModel::flags() const {
  std::vector<std::string> out;
  for (const auto& [n, c] : g)
    if (c.kind() == LocalCumulant::Kind::Tabulated && n >= 3)
      out.push_back("g" + std::to_string(n) + " tabulated: multilinear interpolation");
  return out;
}

// ---------------------------------------------------------------- T_n

namespace {

struct TermLayout {
  std::vector<std::vector<int>> blocks;      // blocks of pi, 0-based slots
  std::vector<int> variable;                 // slot -> kreweras block
  int variables = 0;
  std::vector<const LocalCumulant*> cumulants;
};

// Midpoint rule over the collapsed variables with `P` points each.
double integrate(const TermLayout& t, const std::vector<Profile1D>& deltas, int P) {
  const int v = t.variables;
  bool all_constant = true;
  for (const auto* g : t.cumulants) all_constant = all_constant && g->is_constant();
  if (all_constant) {
    double value = 1.0;
    for (const auto* g : t.cumulants) value *= g->constant_value();
    for (int var = 0; var < v; ++var) {
      CompensatedSum s;
      for (int p = 0; p < P; ++p) {
        const double x = (p + 0.5) / P;
        double prod = 1.0;
        for (std::size_t k = 0; k < deltas.size(); ++k)
          if (t.variable[k] == var) prod *= deltas[k](x);
        s.add(prod);
      }
      value *= s.value() / P;
    }
    return value;
  }
  std::vector<int> idx(v, 0);
  std::vector<double> x(v), args(8);
  CompensatedSum s;
  std::size_t total = 1;
  for (int k = 0; k < v; ++k) total *= static_cast<std::size_t>(P);
  for (std::size_t cell = 0; cell < total; ++cell) {
    std::size_t rest = cell;
    for (int k = v - 1; k >= 0; --k) {
      x[k] = (static_cast<double>(rest % P) + 0.5) / P;
      rest /= P;
    }
    double prod = 1.0;
    for (std::size_t b = 0; b < t.blocks.size() && prod != 0.0; ++b) {
      for (std::size_t e = 0; e < t.blocks[b].size(); ++e) args[e] = x[t.variable[t.blocks[b][e]]];
      prod *= (*t.cumulants[b])(args.data());
    }
    for (std::size_t k = 0; k < deltas.size() && prod != 0.0; ++k) prod *= deltas[k](x[t.variable[k]]);
    s.add(prod);
  }
  return s.value() / static_cast<double>(total);
}

}  // namespace

std::string TnEvaluation::csv_header() { return "n,partition,kreweras,term_value"; }

std::vector<std::string> TnEvaluation::csv_rows() const {
  std::vector<std::string> rows;
  for (const auto& t : terms)
    rows.push_back(std::to_string(n) + "," + csv_field(t.pi.to_string()) + "," + csv_field(t.kreweras.to_string()) +
                   "," + (t.omitted ? std::string("omitted") : format_double(t.value)));
  return rows;
}

nlohmann::json TnEvaluation::to_json() const {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : terms)
    ts.push_back({{"partition", t.pi.to_string()},
                  {"kreweras", t.kreweras.to_string()},
                  {"value", t.value},
                  {"quad_error", t.quad_error},
                  {"points_per_variable", t.points_per_variable},
                  {"omitted", t.omitted},
                  {"note", t.note}});
  return {{"n", n}, {"value", value}, {"quad_error", quad_error}, {"terms", ts}, {"warnings", warnings}};
}

TnEvaluation theory_trace_expectation(const LocalFreeCumulantModel& g, const std::vector<Profile1D>& deltas,
                                      const QuadratureOptions& q) {
  const int n = static_cast<int>(deltas.size());
  if (n < 1) throw PreconditionError("trace expectation needs at least one diagonal");
  if (n > 8) throw SizeLimitError("trace expectation supports n <= 8, got " + std::to_string(n));
  if (q.points < 2) throw PreconditionError("quadrature needs at least 2 points per variable");

  TnEvaluation out;
  out.n = n;
  out.warnings = g.flags();
  std::vector<bool> missing_warned(9, false);
  CompensatedSum total, err;
  for (const auto& pi : enumerate_noncrossing(n)) {
    TermBreakdown term;
    term.pi = pi;
    term.kreweras = kreweras_complement(pi);
    TermLayout t;
    t.variables = term.kreweras.block_count();
    for (int k = 1; k <= n; ++k) t.variable.push_back(term.kreweras.block_of(k));
    bool zero = false;
    for (const auto& b : pi.blocks()) {
      const int size = static_cast<int>(b.size());
      const LocalCumulant* c = g.find(size);
      if (!c) {
        term.omitted = true;
        term.note = "g" + std::to_string(size) + " unavailable";
        if (!missing_warned[size]) {
          out.warnings.push_back("WARNING: g" + std::to_string(size) + " is not available for " + g.source +
                                 "; terms containing it are omitted");
          missing_warned[size] = true;
        }
        break;
      }
      zero = zero || c->is_zero();
      std::vector<int> slots;
      for (int e : b) slots.push_back(e - 1);
      t.blocks.push_back(slots);
      t.cumulants.push_back(c);
    }
    if (!term.omitted && zero) {
      term.note = "exact zero";
    } else if (!term.omitted) {
      bool all_constant = true;
      for (const auto* c : t.cumulants) all_constant = all_constant && c->is_constant();
      int P = q.points;
      if (!all_constant) {
        const double cap = std::floor(std::pow(static_cast<double>(q.budget), 1.0 / t.variables) + 1e-9);
        P = std::max(2, std::min(P, static_cast<int>(cap)));
      }
      P -= P % 2;
      term.points_per_variable = P;
      term.value = integrate(t, deltas, P);
      term.quad_error = std::abs(term.value - integrate(t, deltas, P / 2));
      total.add(term.value);
      err.add(term.quad_error);
    }
    out.terms.push_back(std::move(term));
  }
  out.value = total.value();
  out.quad_error = err.value();
  return out;
}

// ---------------------------------------------------------------- comparison

CheckReport compare_theory_vs_mc(const MatrixModel& model, const LocalFreeCumulantModel& g,
                                 const std::vector<Profile1D>& deltas, const VerifyOptions& opt,
                                 const QuadratureOptions& q) {
  const auto& sizes = opt.grid.sizes;
  if (sizes.size() < 2) throw PreconditionError("theory comparison needs at least two sizes");
  if (deltas.size() > 4) throw PreconditionError("Monte Carlo comparison supports n <= 4");
  CheckReport r;
  r.type = "theory";
  r.subject = model.describe();
  r.tolerance = 3.0;
  r.grid = opt.grid;
  r.seed = model.ensemble().seed;

  const auto th = theory_trace_expectation(g, deltas, q);
  const ObservableSpec o = ObservableSpec::dressed_trace(deltas);
  std::vector<CumulantEstimate> mc;
  for (std::size_t k = sizes.size() - 2; k < sizes.size(); ++k) {
    const MatrixModel sized = model.with_size(sizes[k]);
    mc.push_back(estimate_cumulant(sized, o, {opt.grid.samples, 0, opt.jobs}));
    r.points.push_back({sizes[k], mc.back().value.real(), mc.back().std_error});
    r.rows.push_back(make_row(sized, o, mc.back()));
  }
  const double value = mc[1].value.real();
  const double finite_size = std::abs(mc[1].value.real() - mc[0].value.real());
  const double roundoff = 1e-10 * std::max(1.0, std::abs(th.value));
  const double combined = std::sqrt(mc[1].std_error * mc[1].std_error + th.quad_error * th.quad_error +
                                    finite_size * finite_size + roundoff * roundoff);
  const double diff = std::abs(value - th.value);
  bool omitted = false;
  for (const auto& t : th.terms) omitted = omitted || t.omitted;
  r.verdict = diff <= 3.0 * combined ? Verdict::Pass : Verdict::Fail;
  for (const auto& w : th.warnings) r.notes.push_back(w);
  if (omitted) r.notes.push_back("theory value is missing omitted terms");
  r.details = {{"n", deltas.size()},
               {"theory", th.value},
               {"quad_error", th.quad_error},
               {"mc", value},
               {"mc_error", mc[1].std_error},
               {"finite_size_error", finite_size},
               {"combined_error", combined},
               {"difference", diff},
               {"relative_difference", th.value != 0.0 ? diff / std::abs(th.value) : diff},
               {"cumulant_model", g.to_json()},
               {"breakdown", th.to_json()}};
  nlohmann::json dj = nlohmann::json::array();
  for (const auto& d : deltas) dj.push_back(d.to_json());
  r.details["deltas"] = dj;
  return r;
}

}  // namespace sre
