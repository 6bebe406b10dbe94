#pragma once

// Single-trace expectations from local free cumulants: a sum over
// non-crossing partitions with Kreweras-collapsed integration variables.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sre/partition.hpp"
#include "sre/scaling.hpp"

namespace sre {

/// One local free cumulant g_n(x_1, ..., x_n).
class LocalCumulant {
 public:
  enum class Kind { Zero, Constant, Profile1, Profile2, Tabulated };

  LocalCumulant() = default;
  /// Exactly zero at leading order (not "unknown").
  static LocalCumulant exact_zero(int n);
  static LocalCumulant constant(int n, double c);
  static LocalCumulant of_profile(const Profile1D& p);
  static LocalCumulant of_profile(const Profile2D& p);
  /// Values on the uniform grid {k/(size-1)}^n, row-major in x_1..x_n,
  /// multilinear interpolation.
  static LocalCumulant tabulated(int n, int size, std::vector<double> values);

  /// A number (constant), "zero", a profile object (n = 1, 2), or
  /// {"type": "tabulated", "size": s, "values": [...]}.
  static LocalCumulant from_json(int n, const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;

  int order() const noexcept { return n_; }
  Kind kind() const noexcept { return kind_; }
  bool is_zero() const noexcept { return kind_ == Kind::Zero || (kind_ == Kind::Constant && c_ == 0.0); }
  bool is_constant() const noexcept { return kind_ == Kind::Zero || kind_ == Kind::Constant; }
  double constant_value() const noexcept { return kind_ == Kind::Constant ? c_ : 0.0; }
  double operator()(const double* x) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Zero;
  int n_ = 1;
  double c_ = 0.0;
  Profile1D p1_;
  Profile2D p2_;
  int size_ = 0;
  std::vector<double> table_;
};

struct LocalFreeCumulantModel {
  /// Missing orders are unknown, not zero.
  std::map<int, LocalCumulant> g;
  std::string source;

  /// GUE: g_2 = 1; BandWigner: g_2 = sigma; invariant ensembles: free
  /// cumulants of the spectral law; Deterministic: g_1 = diagonal. Orders
  /// above 2 of the Wigner ensembles are exact zeros.
  static LocalFreeCumulantModel for_ensemble(const EnsembleSpec& spec, int n_max = 8);
  /// Same, or empty (every order unknown) when the model has transforms.
  static LocalFreeCumulantModel for_model(const MatrixModel& model, int n_max = 8);
  /// {"source": ..., "g": {"1": ..., "2": ...}}
  static LocalFreeCumulantModel from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;

  const LocalCumulant* find(int n) const;
  /// Flags for the report, e.g. interpolated tabulated orders.
  std::vector<std::string> flags() const;
};

/// m_n = sum over NC(n) of prod kappa_{|b|}; index 0 holds order 1.
std::vector<double> free_moments(const std::vector<double>& kappa);
std::vector<double> free_cumulants(const std::vector<double>& moments);
/// Moments int_0^1 lambda(x)^p dx, p = 1..n_max, by the midpoint rule.
std::vector<double> spectral_moments(const Profile1D& lambda, int n_max, int points = 1 << 16);

struct QuadratureOptions {
  /// Midpoint points per integration variable.
  int points = 256;
  /// Cap on the total number of grid points of one term.
  std::size_t budget = std::size_t{1} << 24;
};

struct TermBreakdown {
  SetPartition pi;
  SetPartition kreweras;
  double value = 0.0;
  double quad_error = 0.0;
  int points_per_variable = 0;
  bool omitted = false;
  std::string note;
};

struct TnEvaluation {
  int n = 0;
  double value = 0.0;
  double quad_error = 0.0;
  std::vector<TermBreakdown> terms;
  std::vector<std::string> warnings;

  static std::string csv_header();
  /// One breakdown row per partition: n, partition, kreweras, term value.
  std::vector<std::string> csv_rows() const;
  nlohmann::json to_json() const;
};

/// int prod_k Delta_k(x_k) T_n(x) dx for n = deltas.size() <= 8. Terms with an
/// unknown g are omitted with a warning.
TnEvaluation theory_trace_expectation(const LocalFreeCumulantModel& g, const std::vector<Profile1D>& deltas,
                                      const QuadratureOptions& q = {});

/// E[tr(M D_1 ... M D_n)/N] at the two largest grid sizes against the theory
/// value; PASS iff the difference is within 3 combined errors (statistical,
/// quadrature and the finite-size shift between the two sizes).
CheckReport compare_theory_vs_mc(const MatrixModel& model, const LocalFreeCumulantModel& g,
                                 const std::vector<Profile1D>& deltas, const VerifyOptions& opt,
                                 const QuadratureOptions& q = {});

}  // namespace sre
