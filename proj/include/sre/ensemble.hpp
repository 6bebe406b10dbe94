#pragma once

// Seeded Hermitian random-matrix ensembles. Every sample is a pure function of
// (spec, sample index); entry-level streams are keyed by (seed, N, index, i, j).

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "sre/numeric.hpp"
#include "sre/profile.hpp"

namespace sre {

using Matrix = Eigen::MatrixXcd;

enum class EnsembleKind { GUE, BandWigner, UnitarilyInvariant, OrthogonallyInvariant, Deterministic };

std::string to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(const std::string& name);

/// x = i/N for the 1-based row index i.
inline double grid_point(int i, int N) { return static_cast<double>(i) / static_cast<double>(N); }

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::GUE;
  int N = 64;
  std::uint64_t seed = 1;
  /// Variance profile of BandWigner.
  Profile2D sigma = Profile2D::constant(1.0);
  /// Spectrum of the invariant ensembles; diagonal of Deterministic.
  Profile1D spectrum = Profile1D::sign();

  static EnsembleSpec gue(int N, std::uint64_t seed = 1);
  static EnsembleSpec band_wigner(Profile2D sigma, int N, std::uint64_t seed = 1);
  static EnsembleSpec unitarily_invariant(Profile1D spectrum, int N, std::uint64_t seed = 1);
  static EnsembleSpec orthogonally_invariant(Profile1D spectrum, int N, std::uint64_t seed = 1);
  /// diag(spectrum(i/N)); the identity matrix by default.
  static EnsembleSpec deterministic(int N, Profile1D diagonal = Profile1D::constant(1.0));

  /// {"kind": ..., "N": ..., "seed": ..., "profile": ...}
  static EnsembleSpec from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;

  EnsembleSpec with_size(int n) const;
  EnsembleSpec with_seed(std::uint64_t s) const;
  /// Entries independent up to Hermitian symmetry (cheap single-entry access).
  bool independent_entries() const noexcept;
  std::string name() const;
  void validate() const;
};

Matrix sample(const EnsembleSpec& spec, std::uint64_t index);
std::vector<Matrix> sample(const EnsembleSpec& spec, std::uint64_t first, std::size_t count);

/// M_ij of sample `index` without building the matrix (0-based i, j).
/// Only for ensembles with independent entries.
cplx sample_entry(const EnsembleSpec& spec, std::uint64_t index, int i, int j);

/// Haar unitary from the QR factorization of a Ginibre matrix with the phase fix.
Matrix haar_unitary(int N, std::uint64_t seed, std::uint64_t index);
/// Haar orthogonal matrix (real, stored complex).
Matrix haar_orthogonal(int N, std::uint64_t seed, std::uint64_t index);

/// e^{-i theta_i} M_ij e^{i theta_j}
Matrix gauge_transform(const Matrix& m, const std::vector<double>& phases);
/// M_ij - delta_ij a(i/N)
Matrix shift_diagonal(const Matrix& m, const Profile1D& a);

struct DiagonalProfile {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t samples = 0;
};
/// Per-row sample mean of M_ii.
DiagonalProfile diagonal_profile(const EnsembleSpec& spec, std::size_t samples, int jobs = 1);

bool is_hermitian(const Matrix& m);

}  // namespace sre
