#pragma once

// Polynomial and entry-wise matrix transforms, and MatrixModel: an ensemble
// followed by a chain of sample-wise transforms.

#include <string>
#include <vector>

#include "json.hpp"
#include "sre/ensemble.hpp"

namespace sre {

/// a_0 I + a_1 M + ... + a_d M^d with real coefficients.
struct PolySpec {
  std::vector<double> coefficients;

  static PolySpec monomial(int power, double coefficient = 1.0);
  /// Accepts {"coefficients": [...]} or {"monomial": p}.
  static PolySpec from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;
  int degree() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
  void validate() const;
  std::string describe() const;
};

Matrix poly_apply(const Matrix& m, const PolySpec& p);

enum class DiagonalPolicy { Zero, Same };

/// Y_ij = M_ij f_{x,y}(N |M_ij|^2) with f_{x,y}(u) = sum_d c_d(x, y) u^d,
/// x = i/N, y = j/N.
struct EntrywiseSpec {
  std::vector<Profile2D> coefficients;
  DiagonalPolicy diagonal = DiagonalPolicy::Zero;

  /// f(u) = u^power everywhere.
  static EntrywiseSpec monomial(int power, double coefficient = 1.0);
  /// {"coefficients": [profile, ...], "diagonal": "zero" | "same"}
  static EntrywiseSpec from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;
  /// Truncation degree D.
  int degree() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
  double f(double x, double y, double u) const;
  /// Transformed value of one entry (0-based indices).
  cplx apply(cplx m, int i, int j, int N) const;
  std::string describe() const;
};

/// Throws PreconditionError when f is not symmetric in (x, y), since Y would
/// not be Hermitian.
Matrix entrywise_apply(const Matrix& m, const EntrywiseSpec& f);

struct TransformStep {
  enum class Kind { Poly, Entrywise, Shift };
  Kind kind = Kind::Poly;
  PolySpec poly;
  EntrywiseSpec entrywise;
  Profile1D shift;

  static TransformStep polynomial(PolySpec p);
  static TransformStep entry_wise(EntrywiseSpec f);
  static TransformStep diagonal_shift(Profile1D a);
  /// {"poly": {...}} | {"entrywise": {...}} | {"shift": profile}
  static TransformStep from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;
  std::string describe() const;
};

class MatrixModel {
 public:
  MatrixModel() = default;
  explicit MatrixModel(EnsembleSpec ensemble, std::vector<TransformStep> steps = {});

  const EnsembleSpec& ensemble() const noexcept { return ensemble_; }
  const std::vector<TransformStep>& steps() const noexcept { return steps_; }
  int N() const noexcept { return ensemble_.N; }

  MatrixModel with_size(int n) const;
  MatrixModel then(TransformStep step) const;

  Matrix sample(std::uint64_t index) const;
  /// Every step acts entry by entry on an ensemble with independent entries.
  bool entry_local() const noexcept;
  /// Entry (i, j) of sample `index`, 0-based; requires entry_local().
  cplx entry(std::uint64_t index, int i, int j) const;

  std::string describe() const;
  nlohmann::json to_json() const;

 private:
  EnsembleSpec ensemble_;
  std::vector<TransformStep> steps_;
};

/// Per-row sample mean of the model's diagonal.
DiagonalProfile diagonal_profile(const MatrixModel& model, std::size_t samples, int jobs = 1);

/// Throws PreconditionError if some diagonal mean differs from 0 by more than
/// `z` standard errors (entry-wise transforms assume a centered ensemble).
void require_centered(const MatrixModel& model, std::size_t samples, double z = 5.0, int jobs = 1);

}  // namespace sre
