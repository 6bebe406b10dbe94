#include "sre/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sre/errors.hpp"

namespace sre {

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

struct LineFit {
  double slope = 0.0, intercept = 0.0, slope_error = 0.0, r_squared = 1.0;
};

// Weighted least squares y = intercept + slope x. With inverse-variance
// weights the slope error is inflated by sqrt(chi^2/dof) when that exceeds 1.
LineFit weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w,
                      bool inverse_variance) {
  const std::size_t n = x.size();
  CompensatedSum sw, swx, swy;
  for (std::size_t k = 0; k < n; ++k) {
    sw.add(w[k]);
    swx.add(w[k] * x[k]);
    swy.add(w[k] * y[k]);
  }
  const double xm = swx.value() / sw.value(), ym = swy.value() / sw.value();
  CompensatedSum sxx, sxy, syy;
  for (std::size_t k = 0; k < n; ++k) {
    sxx.add(w[k] * (x[k] - xm) * (x[k] - xm));
    sxy.add(w[k] * (x[k] - xm) * (y[k] - ym));
    syy.add(w[k] * (y[k] - ym) * (y[k] - ym));
  }
  LineFit f;
  f.slope = sxy.value() / sxx.value();
  f.intercept = ym - f.slope * xm;
  CompensatedSum rss;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = y[k] - f.intercept - f.slope * x[k];
    rss.add(w[k] * r * r);
  }
  const double dof = static_cast<double>(n) - 2.0;
  if (inverse_variance) {
    f.slope_error = std::sqrt(1.0 / sxx.value());
    if (dof > 0 && rss.value() / dof > 1.0) f.slope_error *= std::sqrt(rss.value() / dof);
  } else {
    f.slope_error = dof > 0 ? std::sqrt(rss.value() / dof / sxx.value()) : 0.0;
  }
  if (syy.value() > 0)
    f.r_squared = 1.0 - rss.value() / syy.value();
  else
    f.r_squared = 1.0;
  return f;
}

std::vector<double> log_sizes(const std::vector<ScalePoint>& pts) {
  std::vector<double> x;
  for (const auto& p : pts) x.push_back(std::log(static_cast<double>(p.N)));
  return x;
}

}  // namespace

nlohmann::json ScalingFit::to_json() const {
  return {{"exponent", exponent},
          {"exponent_error", exponent_error},
          {"log_prefactor", log_prefactor},
          {"r_squared", r_squared},
          {"sign_consistent", sign_consistent},
          {"indistinguishable_from_zero", indistinguishable_from_zero},
          {"bound_exponent", optional_json(bound_exponent)},
          {"points", points},
          {"note", note}};
}

ScalingFit fit_exponent(const std::vector<ScalePoint>& points) {
  if (points.size() < 3)
    throw PreconditionError("exponent fit needs at least 3 points, got " + std::to_string(points.size()));
  for (const auto& p : points) {
    if (p.N <= 0) throw PreconditionError("exponent fit needs positive N");
    if (!std::isfinite(p.value) || !(p.error >= 0)) throw DomainError("non-finite point in exponent fit");
  }
  ScalingFit fit;
  fit.points = points.size();

  int positive = 0, negative = 0;
  for (const auto& p : points)
    if (std::abs(p.value) > 2 * p.error) (p.value > 0 ? positive : negative)++;
  fit.sign_consistent = positive == 0 || negative == 0;

  const auto all_x = log_sizes(points);
  {
    std::vector<double> y, w(points.size(), 1.0);
    bool ok = true;
    for (const auto& p : points) {
      const double env = std::abs(p.value) + 2 * p.error;
      ok = ok && env > 0;
      y.push_back(ok ? std::log(env) : 0.0);
    }
    if (ok) fit.bound_exponent = weighted_line(all_x, y, w, false).slope;
  }

  // Jointly consistent with zero: chi^2 below its 99% quantile (Wilson-Hilferty).
  bool jointly_zero = true;
  {
    CompensatedSum chi2;
    for (const auto& p : points) {
      if (p.error == 0.0) {
        jointly_zero = jointly_zero && p.value == 0.0;
        continue;
      }
      chi2.add((p.value / p.error) * (p.value / p.error));
    }
    const double k = static_cast<double>(points.size());
    const double q = k * std::pow(1.0 - 2.0 / (9.0 * k) + 2.326 * std::sqrt(2.0 / (9.0 * k)), 3);
    jointly_zero = jointly_zero && chi2.value() <= q;
  }

  if (positive + negative == 0 || jointly_zero) {
    fit.indistinguishable_from_zero = true;
    fit.exponent = fit.bound_exponent.value_or(0.0);
    fit.note = "indistinguishable from zero";
    return fit;
  }

  std::vector<double> x, y, w;
  bool exact = false;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (points[k].value != 0.0 && points[k].error == 0.0) exact = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    if (p.value == 0.0) continue;
    x.push_back(all_x[k]);
    y.push_back(std::log(std::abs(p.value)));
    w.push_back(exact ? 1.0 : (p.value / p.error) * (p.value / p.error));
  }
  if (x.size() < 2) {
    fit.sign_consistent = false;
    fit.note = "too few nonzero points";
    return fit;
  }
  const LineFit line = weighted_line(x, y, w, !exact);
  fit.exponent = line.slope;
  fit.exponent_error = line.slope_error;
  fit.log_prefactor = line.intercept;
  fit.r_squared = line.r_squared;
  if (!fit.sign_consistent) fit.note = "no clean power law: sign flip across N";
  return fit;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Bounded: return "BOUNDED";
  }
  return "?";
}

Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) { return v == Verdict::Fail ? 2 : v == Verdict::Bounded ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

Verdict judge(const ScalingFit& fit, double target, double tolerance, TargetMode mode) {
  if (fit.indistinguishable_from_zero) return Verdict::Bounded;
  if (!fit.sign_consistent) return Verdict::Fail;
  const bool ok = mode == TargetMode::Equal ? std::abs(fit.exponent - target) <= tolerance
                                            : fit.exponent <= target + tolerance;
  return ok ? Verdict::Pass : Verdict::Fail;
}

// ---------------------------------------------------------------- grid

NGrid NGrid::from_json(const nlohmann::json& j, const std::string& path) {
  NGrid g;
  if (!j.is_object()) throw ConfigError(path, "grid must be an object");
  try {
    if (j.contains("sizes")) g.sizes = j.at("sizes").get<std::vector<int>>();
    if (j.contains("samples")) g.samples = j.at("samples").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path, e.what());
  }
  try {
    g.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
  return g;
}

nlohmann::json NGrid::to_json() const { return {{"sizes", sizes}, {"samples", samples}}; }

void NGrid::validate() const {
  if (sizes.size() < 3) throw PreconditionError("grid needs at least 3 sizes");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 8) throw PreconditionError("grid sizes must be at least 8");
    if (k && sizes[k] <= sizes[k - 1]) throw PreconditionError("grid sizes must be strictly ascending");
  }
  if (samples < 2) throw PreconditionError("grid needs at least 2 samples per size");
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back({{"N", p.N}, {"value", p.value}, {"error", p.error}});
  nlohmann::json sub = nlohmann::json::array();
  for (const auto& p : parts) sub.push_back(p.to_json());
  return {{"parts", sub},
          {"name", name},
          {"type", type},
          {"subject", subject},
          {"target_exponent", optional_json(target)},
          {"fitted", fit ? nlohmann::json(fit->exponent) : nlohmann::json()},
          {"error", fit ? nlohmann::json(fit->exponent_error) : nlohmann::json()},
          {"r_squared", fit ? nlohmann::json(fit->r_squared) : nlohmann::json()},
          {"fit", fit ? fit->to_json() : nlohmann::json()},
          {"verdict", to_string(verdict)},
          {"tolerance", optional_json(tolerance)},
          {"grid", grid ? grid->to_json() : nlohmann::json()},
          {"seeds", {seed}},
          {"points", pts},
          {"notes", notes},
          {"details", details},
          {"wall_seconds", wall_seconds}};
}

// ---------------------------------------------------------------- patterns

std::vector<double> default_pattern(int n) {
  std::vector<double> x;
  for (int k = 1; k <= n; ++k) x.push_back((2.0 * k - 1.0) / (2.0 * n));
  return x;
}

std::vector<int> pattern_indices(const std::vector<double>& x, int N) {
  std::vector<int> out;
  std::set<int> seen;
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("index pattern positions must lie in [0,1]");
    const int i = std::clamp(static_cast<int>(std::lround(v * N)), 1, N);
    if (!seen.insert(i).second)
      throw PreconditionError("index pattern collides at N=" + std::to_string(N) + " (index " + std::to_string(i) +
                              ")");
    out.push_back(i);
  }
  return out;
}

namespace {

CheckReport base_report(const std::string& type, const MatrixModel& model, const VerifyOptions& opt) {
  opt.grid.validate();
  CheckReport r;
  r.type = type;
  r.subject = model.describe();
  r.tolerance = opt.tolerance;
  r.grid = opt.grid;
  r.seed = model.ensemble().seed;
  return r;
}

EstimateOptions estimate_options(const VerifyOptions& opt) { return {opt.grid.samples, 0, opt.jobs}; }

// Sweeps `make(N)` over the grid, fits and judges.
template <class Make>
void sweep(CheckReport& r, const MatrixModel& model, const VerifyOptions& opt, double target, Make make) {
  double worst_im = 0.0;
  for (int N : opt.grid.sizes) {
    const MatrixModel sized = model.with_size(N);
    const ObservableSpec o = make(N);
    const auto e = estimate_cumulant(sized, o, estimate_options(opt));
    r.points.push_back({N, e.value.real(), e.std_error});
    r.rows.push_back(make_row(sized, o, e));
    worst_im = std::max(worst_im, std::abs(e.value.imag()) / std::max(e.std_error_im, 1e-300));
  }
  r.target = target;
  r.fit = fit_exponent(r.points);
  r.verdict = judge(*r.fit, target, opt.tolerance);
  r.details["max_imag_over_error"] = worst_im;
  if (!r.fit->note.empty()) r.notes.push_back(r.fit->note);
}

}  // namespace

CheckReport verify_axiom_ii(const MatrixModel& model, int n, std::vector<double> pattern, const VerifyOptions& opt) {
  if (n < 1 || n > 4) throw PreconditionError("axiom (ii) check takes 1 <= n <= 4");
  if (pattern.empty()) pattern = default_pattern(n);
  if (static_cast<int>(pattern.size()) != n) throw PreconditionError("index pattern must have n positions");
  CheckReport r = base_report("axiom_ii", model, opt);
  r.details["n"] = n;
  r.details["pattern"] = pattern;
  nlohmann::json idx = nlohmann::json::object();
  sweep(r, model, opt, 1.0 - n, [&](int N) {
    auto i = pattern_indices(pattern, N);
    idx[std::to_string(N)] = i;
    return ObservableSpec::entry_cycles({i});
  });
  r.details["indices"] = idx;
  r.details["prefactor"] = std::exp(r.fit->log_prefactor);
  return r;
}

CheckReport verify_axiom_iv(const MatrixModel& model, const std::vector<std::vector<double>>& cycles,
                            const std::vector<std::vector<int>>& insertions, const VerifyOptions& opt) {
  if (cycles.empty()) throw PreconditionError("axiom (iv) check needs at least one cycle");
  std::vector<std::vector<int>> powers;
  int n = 0;
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    n += static_cast<int>(cycles[c].size());
    std::vector<int> p(cycles[c].size(), 1);
    if (!insertions.empty()) {
      if (insertions.size() != cycles.size() || insertions[c].size() != cycles[c].size())
        throw PreconditionError("insertions must match the cycle layout");
      for (std::size_t l = 0; l < p.size(); ++l) p[l] = insertions[c][l] + 1;
    }
    powers.push_back(p);
  }
  if (n > kMaxCumulantOrder)
    throw SizeLimitError("total order " + std::to_string(n) + " exceeds the cap " + std::to_string(kMaxCumulantOrder));
  const int r_count = static_cast<int>(cycles.size());
  CheckReport r = base_report("axiom_iv", model, opt);
  r.details["cycles"] = cycles;
  r.details["powers"] = powers;
  nlohmann::json idx = nlohmann::json::object();
  sweep(r, model, opt, 2.0 - r_count - n, [&](int N) {
    std::vector<std::vector<int>> ind;
    for (const auto& c : cycles) ind.push_back(pattern_indices(c, N));
    idx[std::to_string(N)] = ind;
    return ObservableSpec::entry_cycles(ind, powers);
  });
  r.details["indices"] = idx;
  return r;
}

CheckReport verify_axiom_iv(const MatrixModel& model, const CycleSpec& cs, const VerifyOptions& opt) {
  const auto x = default_pattern(cs.edge_count());
  std::vector<std::vector<double>> cycles;
  std::size_t k = 0;
  for (const auto& c : cs.cycles()) {
    cycles.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(k), x.begin() + static_cast<std::ptrdiff_t>(k + c.size()));
    k += c.size();
  }
  auto r = verify_axiom_iv(model, cycles, cs.cycles(), opt);
  r.details["cycle_spec"] = cs.to_string();
  return r;
}

CheckReport verify_trace_cumulant(const MatrixModel& model, const std::vector<int>& powers, const VerifyOptions& opt) {
  if (powers.empty() || powers.size() > 4) throw PreconditionError("trace cumulants take 1 to 4 traces");
  for (int p : powers)
    if (p < 1 || p > 6) throw PreconditionError("trace powers must lie in 1..6");
  CheckReport r = base_report("trace_cumulant", model, opt);
  r.details["powers"] = powers;
  sweep(r, model, opt, 2.0 - 2.0 * static_cast<double>(powers.size()),
        [&](int) { return ObservableSpec::trace_powers(powers); });
  return r;
}

// ---------------------------------------------------------------- continuity

CheckReport verify_axiom_iii(const MatrixModel& model, const ContinuityOptions& mesh, const VerifyOptions& opt) {
  if (mesh.meshes.size() < 2) throw PreconditionError("continuity check needs at least two meshes");
  for (std::size_t k = 0; k < mesh.meshes.size(); ++k)
    if (mesh.meshes[k] < 2 || (k && mesh.meshes[k] <= mesh.meshes[k - 1]))
      throw PreconditionError("meshes must be ascending and at least 2");
  CheckReport r = base_report("axiom_iii", model, opt);
  const int N = opt.grid.sizes.back();
  if (mesh.meshes.back() > N) throw PreconditionError("mesh finer than the matrix size");
  const MatrixModel sized = model.with_size(N);

  // All mesh cells of all meshes share one sample pass.
  struct Cell {
    int m, a, b, i, j;
  };
  std::vector<Cell> cells;
  ObservableSpec o;
  for (int m : mesh.meshes)
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        const int i = std::clamp(static_cast<int>(std::lround((a + 0.5) / m * N)), 1, N);
        const int j = std::clamp(static_cast<int>(std::lround((b + 0.5) / m * N)), 1, N);
        cells.push_back({m, a, b, i, j});
        o.slots.push_back(Slot::entry(i, j));
        o.slots.push_back(Slot::entry(j, i));
      }
  const auto records = sample_records(sized, o, estimate_options(opt));

  std::vector<double> jumps;
  nlohmann::json meshes = nlohmann::json::array();
  std::size_t c = 0;
  for (int m : mesh.meshes) {
    std::vector<std::vector<double>> g(m, std::vector<double>(m)), se(m, std::vector<double>(m));
    for (; c < cells.size() && cells[c].m == m; ++c) {
      std::vector<std::vector<cplx>> pair(records.size());
      for (std::size_t s = 0; s < records.size(); ++s) pair[s] = {records[s][2 * c], records[s][2 * c + 1]};
      const auto e = cumulant_from_records(pair);
      const auto& cell = cells[c];
      g[cell.a][cell.b] = g[cell.b][cell.a] = N * e.value.real();
      se[cell.a][cell.b] = se[cell.b][cell.a] = N * e.std_error;
      EstimateRow row = make_row(sized, ObservableSpec::entry_cycles({{cell.i, cell.j}}), e);
      if (cell.i == cell.j) row.observable = "C2[M_" + std::to_string(cell.i) + "_" + std::to_string(cell.i) + ",M_" +
                                             std::to_string(cell.i) + "_" + std::to_string(cell.i) + "]";
      r.rows.push_back(row);
    }
    double raw = 0.0, significant = 0.0;
    auto consider = [&](int a1, int b1, int a2, int b2) {
      const double d = std::abs(g[a1][b1] - g[a2][b2]);
      const double s = std::hypot(se[a1][b1], se[a2][b2]);
      raw = std::max(raw, d);
      significant = std::max(significant, std::max(d - 3.0 * s, 0.0));
    };
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (a + 1 < m) consider(a, b, a + 1, b);
        if (b + 1 < m) consider(a, b, a, b + 1);
      }
    jumps.push_back(significant);
    meshes.push_back({{"mesh", m}, {"max_jump", raw}, {"max_significant_jump", significant}, {"g2", g}});
  }

  r.verdict = Verdict::Pass;
  for (std::size_t k = 1; k < jumps.size(); ++k)
    if (jumps[k] > 0.0 && jumps[k] > 0.75 * jumps[k - 1]) r.verdict = Verdict::Fail;
  if (r.verdict == Verdict::Fail) r.notes.push_back("jumps do not shrink under mesh refinement");
  r.details["N"] = N;
  r.details["meshes"] = meshes;
  r.details["shrink_factor"] = 0.75;
  return r;
}

// ---------------------------------------------------------------- self-averaging

namespace {

struct GapEstimate {
  double gap = 0.0, error = 0.0;
  bool finite = true;
};

GapEstimate exponential_gap(const std::vector<double>& X, double z, int N) {
  const std::size_t M = X.size();
  const double dM = static_cast<double>(M);
  CompensatedSum sx;
  for (double v : X) sx.add(v);
  const double mean = sx.value() / dM;
  std::vector<double> e(M);
  CompensatedSum se;
  for (std::size_t s = 0; s < M; ++s) {
    e[s] = std::exp(z * (X[s] - mean));
    se.add(e[s]);
  }
  GapEstimate g;
  const double L = std::log(se.value() / dM);
  if (!std::isfinite(L) || !std::isfinite(se.value())) {
    g.finite = false;
    return g;
  }
  g.gap = L / N;
  std::vector<double> loo(M);
  CompensatedSum sl;
  for (std::size_t s = 0; s < M; ++s) {
    const double mean_s = (sx.value() - X[s]) / (dM - 1);
    loo[s] = z * (mean - mean_s) + std::log((se.value() - e[s]) / (dM - 1));
    sl.add(loo[s]);
  }
  const double lbar = sl.value() / dM;
  CompensatedSum var;
  for (double v : loo) var.add((v - lbar) * (v - lbar));
  g.error = std::sqrt((dM - 1) / dM * var.value()) / N;
  g.finite = std::isfinite(g.error);
  return g;
}

}  // namespace

CheckReport verify_self_averaging(const MatrixModel& model, double z, const VerifyOptions& opt) {
  if (!(std::abs(z) > 0) || !std::isfinite(z)) throw PreconditionError("self-averaging needs a nonzero finite z");
  CheckReport r = base_report("self_averaging", model, opt);
  const ObservableSpec trace = ObservableSpec::trace_powers({1});

  std::vector<std::vector<double>> X;
  for (int N : opt.grid.sizes) {
    const auto rec = sample_records(model.with_size(N), trace, estimate_options(opt));
    std::vector<double> x(rec.size());
    for (std::size_t s = 0; s < rec.size(); ++s) x[s] = N * rec[s][0].real();
    X.push_back(std::move(x));
  }

  const double z_requested = z;
  std::vector<GapEstimate> gaps;
  for (int attempt = 0;; ++attempt) {
    gaps.clear();
    bool ok = true;
    for (std::size_t k = 0; k < X.size() && ok; ++k) {
      gaps.push_back(exponential_gap(X[k], z, opt.grid.sizes[k]));
      ok = gaps.back().finite;
    }
    if (ok) break;
    if (attempt == 30) throw DomainError("exponential average overflows for every tried z");
    z /= 2;
  }
  if (z != z_requested)
    r.notes.push_back("z reduced from " + format_double(z_requested) + " to " + format_double(z) +
                      " to avoid overflow");

  for (std::size_t k = 0; k < X.size(); ++k) {
    const int N = opt.grid.sizes[k];
    r.points.push_back({N, gaps[k].gap, gaps[k].error});
    EstimateRow row;
    row.ensemble = model.describe();
    row.observable = "(1/N)log E exp(z tr M) - z E[tr M]/N, z=" + format_double(z);
    row.N = N;
    row.samples = X[k].size();
    row.order = 0;
    row.value_re = gaps[k].gap;
    row.std_error = gaps[k].error;
    row.seed = model.ensemble().seed;
    r.rows.push_back(row);
  }
  r.target = -1.0;
  r.fit = fit_exponent(r.points);
  r.verdict = judge(*r.fit, -1.0, opt.tolerance, TargetMode::AtMost);
  if (!r.fit->note.empty()) r.notes.push_back(r.fit->note);
  r.details["z"] = z;
  r.details["z_requested"] = z_requested;
  r.details["mode"] = "at_most";

  nlohmann::json terms = nlohmann::json::array();
  for (int n : {2, 3}) {
    std::vector<ScalePoint> pts;
    double factorial = n == 2 ? 2.0 : 6.0;
    for (std::size_t k = 0; k < X.size(); ++k) {
      std::vector<std::vector<cplx>> rec(X[k].size(), std::vector<cplx>(n));
      for (std::size_t s = 0; s < X[k].size(); ++s) std::fill(rec[s].begin(), rec[s].end(), cplx(X[k][s], 0.0));
      const auto e = cumulant_from_records(rec);
      const double scale = std::pow(z, n) / factorial;
      pts.push_back({opt.grid.sizes[k], scale * e.value.real(), std::abs(scale) * e.std_error});
    }
    const auto f = fit_exponent(pts);
    nlohmann::json p = nlohmann::json::array();
    for (const auto& q : pts) p.push_back({{"N", q.N}, {"value", q.value}, {"error", q.error}});
    terms.push_back({{"n", n},
                     {"target_exponent", 2 - n},
                     {"fit", f.to_json()},
                     {"verdict", to_string(judge(f, 2.0 - n, opt.tolerance))},
                     {"points", p}});
  }
  r.details["cumulant_terms"] = terms;
  return r;
}

// ---------------------------------------------------------------- propositions

ProposalCheck ProposalCheck::from_json(const nlohmann::json& j, const std::string& path) {
  ProposalCheck c;
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "axiom_ii") {
      c.kind = Kind::AxiomII;
      c.n = j.value("n", 2);
    } else if (type == "axiom_iv") {
      c.kind = Kind::AxiomIV;
      const auto& cy = j.at("cycles");
      c.cycles = CycleSpec::parse(cy.is_string() ? cy.get<std::string>() : cy.dump());
    } else if (type == "trace_cumulant") {
      c.kind = Kind::Trace;
      c.powers = j.at("powers").get<std::vector<int>>();
    } else {
      throw ConfigError(path + "/type", "unknown proposition check '" + type + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path, e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(path, e.what());
  }
  return c;
}

nlohmann::json ProposalCheck::to_json() const {
  switch (kind) {
    case Kind::AxiomII: return {{"type", "axiom_ii"}, {"n", n}};
    case Kind::AxiomIV: return {{"type", "axiom_iv"}, {"cycles", cycles.to_string()}};
    case Kind::Trace: return {{"type", "trace_cumulant"}, {"powers", powers}};
  }
  return {};
}

std::vector<CheckReport> verify_proposition(const MatrixModel& model, const TransformStep& step,
                                            const std::vector<ProposalCheck>& checks, const VerifyOptions& opt) {
  opt.grid.validate();
  if (step.kind == TransformStep::Kind::Entrywise)
    require_centered(model.with_size(opt.grid.sizes.front()), std::min<std::size_t>(opt.grid.samples, 4000), 5.0,
                     opt.jobs);
  const MatrixModel transformed = model.then(step);
  std::vector<CheckReport> out;
  for (const auto& c : checks)
    for (const MatrixModel* m : {&model, &transformed}) {
      CheckReport r;
      switch (c.kind) {
        case ProposalCheck::Kind::AxiomII: r = verify_axiom_ii(*m, c.n, {}, opt); break;
        case ProposalCheck::Kind::AxiomIV: r = verify_axiom_iv(*m, c.cycles, opt); break;
        case ProposalCheck::Kind::Trace: r = verify_trace_cumulant(*m, c.powers, opt); break;
      }
      r.details["transform"] = m == &model ? nlohmann::json() : step.to_json();
      r.details["role"] = m == &model ? "untransformed" : "transformed";
      out.push_back(std::move(r));
    }
  return out;
}

}  // namespace sre
