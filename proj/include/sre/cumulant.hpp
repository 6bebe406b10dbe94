#pragma once

// Plug-in joint cumulant estimates of matrix-entry monomials and trace
// observables, with delete-1 jackknife errors.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sre/transform.hpp"

namespace sre {

inline constexpr int kMaxCumulantOrder = 6;

/// One argument of a joint cumulant.
struct Slot {
  enum class Kind { Entry, TracePower, DressedTrace };
  Kind kind = Kind::Entry;
  /// Entry: (M^power)_{row,col}, 1-based indices.
  int row = 1;
  int col = 1;
  /// Entry and TracePower exponent.
  int power = 1;
  /// DressedTrace: tr(M D_1 M D_2 ... M D_n) / N with D_k = diag(delta_k(i/N)).
  std::vector<Profile1D> deltas;

  static Slot entry(int row, int col, int power = 1);
  static Slot trace_power(int p);
  static Slot dressed_trace(std::vector<Profile1D> deltas);
  std::string describe() const;
};

struct ObservableSpec {
  std::vector<Slot> slots;

  /// C_n[M_{i1 i2}, M_{i2 i3}, ..., M_{in i1}] for each listed cycle; cycles
  /// must not share an index. `powers[c][l]` turns edge l into (M^{p})_{ij}.
  static ObservableSpec entry_cycles(const std::vector<std::vector<int>>& cycles,
                                     const std::vector<std::vector<int>>& powers = {});
  static ObservableSpec trace_powers(const std::vector<int>& powers);
  static ObservableSpec dressed_trace(std::vector<Profile1D> deltas);
  /// n copies of one slot (C_n[X, ..., X]).
  static ObservableSpec repeated(const Slot& s, int n);

  int order() const noexcept { return static_cast<int>(slots.size()); }
  std::string describe() const;
};

/// One scalar per slot. Throws std::out_of_range for indices outside 1..N.
std::vector<cplx> evaluate_observable(const Matrix& m, const ObservableSpec& o);

struct CumulantEstimate {
  int order = 0;
  cplx value;
  double std_error = 0.0;     // real part
  double std_error_im = 0.0;  // imaginary part
  /// Jackknife bias estimate of the plug-in estimator (real part).
  double bias = 0.0;
  std::size_t samples = 0;
  int N = 0;
};

/// records[s][k]: value of slot k in sample s.
CumulantEstimate cumulant_from_records(const std::vector<std::vector<cplx>>& records);

struct EstimateOptions {
  std::size_t samples = 10000;
  std::uint64_t first_index = 0;
  int jobs = 1;
};

/// Per-sample slot values, in sample order.
std::vector<std::vector<cplx>> sample_records(const MatrixModel& model, const ObservableSpec& o,
                                              const EstimateOptions& opt);

CumulantEstimate estimate_cumulant(const MatrixModel& model, const ObservableSpec& o, const EstimateOptions& opt);

struct CyclicEstimate {
  CumulantEstimate cumulant;
  /// N^{n-1} C_n: the local free cumulant estimate at x_k = i_k/N.
  cplx scaled;
  double scaled_error = 0.0;
};

/// Indices are 1-based, n <= 6.
CyclicEstimate estimate_cyclic_cumulant(const MatrixModel& model, const std::vector<int>& indices,
                                        const EstimateOptions& opt);

/// r <= 4 traces, powers <= 6.
CumulantEstimate estimate_trace_cumulant(const MatrixModel& model, const std::vector<int>& powers,
                                         const EstimateOptions& opt);

/// Row of raw_estimates.csv.
struct EstimateRow {
  std::string ensemble;
  std::string observable;
  int N = 0;
  std::size_t samples = 0;
  int order = 0;
  double value_re = 0.0;
  double value_im = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;

  static std::string csv_header();
  std::string csv() const;
};

EstimateRow make_row(const MatrixModel& model, const ObservableSpec& o, const CumulantEstimate& e);

/// Shortest round-trip decimal text of a double.
std::string format_double(double v);
/// Quotes a CSV field when needed.
std::string csv_field(const std::string& s);

}  // namespace sre
