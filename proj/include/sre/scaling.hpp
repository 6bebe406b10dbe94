#pragma once

// Sweeps over N, log-log exponent fits and the verdicts built from them.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sre/cumulant.hpp"
#include "sre/oracle.hpp"

namespace sre {

struct ScalePoint {
  int N = 0;
  double value = 0.0;
  double error = 0.0;
};

struct ScalingFit {
  double exponent = 0.0;
  double exponent_error = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  /// Every point farther than 2 sigma from zero has the same sign.
  bool sign_consistent = true;
  /// Every point lies within 2 sigma of zero, or chi^2 against zero is below its
  /// 99% quantile; only `bound_exponent` is meaningful.
  bool indistinguishable_from_zero = false;
  /// Slope of log(|value| + 2 sigma), an upper envelope.
  std::optional<double> bound_exponent;
  std::size_t points = 0;
  std::string note;

  nlohmann::json to_json() const;
};

/// Weighted least squares of log|value| against log N, weights (|value|/error)^2
/// (uniform when some error is zero). Needs at least 3 points.
ScalingFit fit_exponent(const std::vector<ScalePoint>& points);

enum class Verdict { Pass, Fail, Bounded };
std::string to_string(Verdict v);
/// Fail > Bounded > Pass.
Verdict worst(Verdict a, Verdict b);

enum class TargetMode {
  /// |fitted - target| <= tolerance
  Equal,
  /// fitted <= target + tolerance
  AtMost,
};

Verdict judge(const ScalingFit& fit, double target, double tolerance, TargetMode mode = TargetMode::Equal);

struct NGrid {
  std::vector<int> sizes{32, 48, 64, 96, 128, 192};
  std::size_t samples = 10000;

  /// {"sizes": [...], "samples": n}
  static NGrid from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;
  void validate() const;
};

struct VerifyOptions {
  NGrid grid;
  double tolerance = 0.25;
  int jobs = 1;
};

/// Outcome of one named check, the unit of the run report.
struct CheckReport {
  std::string name;
  std::string type;
  std::string subject;
  std::optional<double> target;
  std::optional<ScalingFit> fit;
  Verdict verdict = Verdict::Pass;
  std::optional<double> tolerance;
  std::optional<NGrid> grid;
  std::uint64_t seed = 0;
  std::vector<ScalePoint> points;
  std::vector<EstimateRow> rows;
  std::vector<std::string> notes;
  nlohmann::json details = nlohmann::json::object();
  double wall_seconds = 0.0;
  /// Sub-checks of a combined check (proposition reruns).
  std::vector<CheckReport> parts;

  nlohmann::json to_json() const;
};

/// x_k = (2k - 1) / (2n).
std::vector<double> default_pattern(int n);
/// i = round(x N) clamped to 1..N; throws PreconditionError on collisions.
std::vector<int> pattern_indices(const std::vector<double>& x, int N);

/// N^{1-n} law of the cyclic cumulant at fixed x pattern (empty: default).
CheckReport verify_axiom_ii(const MatrixModel& model, int n, std::vector<double> pattern, const VerifyOptions& opt);

/// N^{2-r-n} law of r disjoint cycles. Each cycle lists the x positions of its
/// indices; powers follow the CycleSpec insertion counts (power = insertions + 1).
CheckReport verify_axiom_iv(const MatrixModel& model, const std::vector<std::vector<double>>& cycles,
                            const std::vector<std::vector<int>>& insertions, const VerifyOptions& opt);
/// Disjoint default positions for the cycles of `cs`.
CheckReport verify_axiom_iv(const MatrixModel& model, const CycleSpec& cs, const VerifyOptions& opt);

/// N^{2-2r} law of C_r[tr(M^{n_1})/N, ..., tr(M^{n_r})/N].
CheckReport verify_trace_cumulant(const MatrixModel& model, const std::vector<int>& powers, const VerifyOptions& opt);

struct ContinuityOptions {
  std::vector<int> meshes{4, 8};
};

/// N C_2 on cell-centred (x, y) meshes at the largest N; PASS iff the largest
/// significant jump between neighbouring cells shrinks under refinement.
CheckReport verify_axiom_iii(const MatrixModel& model, const ContinuityOptions& mesh, const VerifyOptions& opt);

/// (1/N) log E exp(z tr M) - z E[tr M]/N against N; PASS iff exponent <= -1 + tolerance.
CheckReport verify_self_averaging(const MatrixModel& model, double z, const VerifyOptions& opt);

struct ProposalCheck {
  enum class Kind { AxiomII, AxiomIV, Trace };
  Kind kind = Kind::AxiomII;
  int n = 2;
  CycleSpec cycles = CycleSpec::from_lengths({2, 2});
  std::vector<int> powers;

  /// {"type": "axiom_ii", "n": 2} | {"type": "axiom_iv", "cycles": "2,2"} |
  /// {"type": "trace_cumulant", "powers": [2, 2]}
  static ProposalCheck from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;
};

/// Reruns `checks` on the model and on the model followed by `step`, with the
/// same samples. Entry-wise steps require a centred ensemble.
std::vector<CheckReport> verify_proposition(const MatrixModel& model, const TransformStep& step,
                                            const std::vector<ProposalCheck>& checks, const VerifyOptions& opt);

}  // namespace sre
