#include "sre/ensemble.hpp"

#include <cmath>

#include "sre/errors.hpp"
#include "sre/parallel.hpp"

namespace sre {

namespace {

enum Tag : std::uint64_t { kEntryTag = 1, kGinibreTag = 2, kOrthogonalTag = 3 };

const std::pair<EnsembleKind, const char*> kKindNames[] = {
    {EnsembleKind::GUE, "gue"},
    {EnsembleKind::BandWigner, "band_wigner"},
    {EnsembleKind::UnitarilyInvariant, "unitarily_invariant"},
    {EnsembleKind::OrthogonallyInvariant, "orthogonally_invariant"},
    {EnsembleKind::Deterministic, "deterministic"},
};

// Independent entries: upper triangle drawn, lower triangle mirrored.
cplx independent_entry(const EnsembleSpec& s, std::uint64_t index, int i, int j) {
  if (s.kind == EnsembleKind::Deterministic) return i == j ? cplx(s.spectrum(grid_point(i + 1, s.N)), 0.0) : cplx{};
  const int a = std::min(i, j), b = std::max(i, j);
  KeyedStream rng{s.seed, static_cast<std::uint64_t>(s.N), index, static_cast<std::uint64_t>(a),
                  static_cast<std::uint64_t>(b), kEntryTag};
  double scale = 1.0 / std::sqrt(static_cast<double>(s.N));
  if (s.kind == EnsembleKind::BandWigner) {
    const double v = s.sigma(grid_point(a + 1, s.N), grid_point(b + 1, s.N));
    scale *= std::sqrt(v);
  }
  if (a == b) return {rng.normal() * scale, 0.0};
  const cplx z = rng.complex_normal() * scale;
  return i < j ? z : std::conj(z);
}

Matrix conjugate_spectrum(const Matrix& u, const EnsembleSpec& s) {
  Eigen::VectorXd lambda(s.N);
  for (int i = 0; i < s.N; ++i) lambda[i] = s.spectrum(grid_point(i + 1, s.N));
  const Matrix full = (u * lambda.asDiagonal()) * u.adjoint();
  Matrix m(s.N, s.N);
  // Upper triangle from the product, lower triangle mirrored.
  for (int j = 0; j < s.N; ++j) {
    for (int i = 0; i < j; ++i) {
      m(i, j) = full(i, j);
      m(j, i) = std::conj(full(i, j));
    }
    m(j, j) = cplx(full(j, j).real(), 0.0);
  }
  return m;
}

}  // namespace

std::string to_string(EnsembleKind kind) {
  for (auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
  for (auto& [k, n] : kKindNames)
    if (name == n) return k;
  if (name == "GUE") return EnsembleKind::GUE;
  throw PreconditionError("unknown ensemble kind '" + name +
                          "' (expected gue, band_wigner, unitarily_invariant, orthogonally_invariant, deterministic)");
}

EnsembleSpec EnsembleSpec::gue(int N, std::uint64_t seed) {
  EnsembleSpec s;
  s.N = N;
  s.seed = seed;
  return s;
}

EnsembleSpec EnsembleSpec::band_wigner(Profile2D sigma, int N, std::uint64_t seed) {
  EnsembleSpec s = gue(N, seed);
  s.kind = EnsembleKind::BandWigner;
  s.sigma = std::move(sigma);
  return s;
}

EnsembleSpec EnsembleSpec::unitarily_invariant(Profile1D spectrum, int N, std::uint64_t seed) {
  EnsembleSpec s = gue(N, seed);
  s.kind = EnsembleKind::UnitarilyInvariant;
  s.spectrum = std::move(spectrum);
  return s;
}

EnsembleSpec EnsembleSpec::orthogonally_invariant(Profile1D spectrum, int N, std::uint64_t seed) {
  EnsembleSpec s = unitarily_invariant(std::move(spectrum), N, seed);
  s.kind = EnsembleKind::OrthogonallyInvariant;
  return s;
}

EnsembleSpec EnsembleSpec::deterministic(int N, Profile1D diagonal) {
  EnsembleSpec s = gue(N, 0);
  s.kind = EnsembleKind::Deterministic;
  s.spectrum = std::move(diagonal);
  return s;
}

EnsembleSpec EnsembleSpec::from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "ensemble must be an object");
  EnsembleSpec s;
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError(path + "/kind", "missing ensemble kind");
  try {
    s.kind = parse_ensemble_kind(j.at("kind").get<std::string>());
  } catch (const PreconditionError& e) {
    throw ConfigError(path + "/kind", e.what());
  }
  if (s.kind == EnsembleKind::Deterministic) s.spectrum = Profile1D::constant(1.0);
  if (j.contains("N")) {
    if (!j.at("N").is_number_integer() || j.at("N").get<long long>() < 2)
      throw ConfigError(path + "/N", "N must be an integer >= 2");
    s.N = j.at("N").get<int>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw ConfigError(path + "/seed", "seed must be a nonnegative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("profile")) {
    if (s.kind == EnsembleKind::BandWigner)
      s.sigma = Profile2D::from_json(j.at("profile"), path + "/profile");
    else if (s.kind != EnsembleKind::GUE)
      s.spectrum = Profile1D::from_json(j.at("profile"), path + "/profile");
    else
      throw ConfigError(path + "/profile", "gue takes no profile");
  }
  return s;
}

nlohmann::json EnsembleSpec::to_json() const {
  nlohmann::json j{{"kind", to_string(kind)}, {"N", N}, {"seed", seed}};
  if (kind == EnsembleKind::BandWigner) j["profile"] = sigma.to_json();
  if (kind != EnsembleKind::GUE && kind != EnsembleKind::BandWigner) j["profile"] = spectrum.to_json();
  return j;
}

EnsembleSpec EnsembleSpec::with_size(int n) const {
  EnsembleSpec s = *this;
  s.N = n;
  return s;
}

EnsembleSpec EnsembleSpec::with_seed(std::uint64_t value) const {
  EnsembleSpec s = *this;
  s.seed = value;
  return s;
}

bool EnsembleSpec::independent_entries() const noexcept {
  return kind == EnsembleKind::GUE || kind == EnsembleKind::BandWigner || kind == EnsembleKind::Deterministic;
}

std::string EnsembleSpec::name() const {
  switch (kind) {
    case EnsembleKind::GUE: return "gue";
    case EnsembleKind::BandWigner: return "band_wigner" + sigma.describe();
    default: return to_string(kind) + spectrum.describe();
  }
}

void EnsembleSpec::validate() const {
  if (N < 2) throw PreconditionError("ensemble size N must be at least 2, got " + std::to_string(N));
  if (kind == EnsembleKind::BandWigner) {
    for (int a = 1; a <= N; ++a)
      for (int b = 1; b <= a; ++b) {
        const double x = grid_point(a, N), y = grid_point(b, N);
        const double v = sigma(x, y);
        if (!(v >= 0) || !std::isfinite(v)) throw PreconditionError("variance profile must be finite and >= 0");
        if (std::abs(v - sigma(y, x)) > 1e-12 * (1 + std::abs(v)))
          throw PreconditionError("variance profile must be symmetric in (x, y)");
      }
  }
}

Matrix haar_unitary(int N, std::uint64_t seed, std::uint64_t index) {
  Matrix g(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      KeyedStream rng{seed, static_cast<std::uint64_t>(N), index, static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(j), kGinibreTag};
      g(i, j) = rng.complex_normal();
    }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(N, N);
  const Matrix& r = qr.matrixQR();
  for (int k = 0; k < N; ++k) {
    const cplx d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= a > 0 ? d / a : cplx(1.0);
  }
  return q;
}

Matrix haar_orthogonal(int N, std::uint64_t seed, std::uint64_t index) {
  Eigen::MatrixXd g(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      KeyedStream rng{seed, static_cast<std::uint64_t>(N), index, static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(j), kOrthogonalTag};
      g(i, j) = rng.normal();
    }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
  for (int k = 0; k < N; ++k)
    if (qr.matrixQR()(k, k) < 0) q.col(k) *= -1.0;
  return q.cast<cplx>();
}

Matrix sample(const EnsembleSpec& spec, std::uint64_t index) {
  if (spec.N < 2) throw PreconditionError("ensemble size N must be at least 2, got " + std::to_string(spec.N));
  const int N = spec.N;
  switch (spec.kind) {
    case EnsembleKind::GUE:
    case EnsembleKind::BandWigner:
    case EnsembleKind::Deterministic: {
      Matrix m(N, N);
      for (int j = 0; j < N; ++j)
        for (int i = 0; i <= j; ++i) {
          const cplx v = independent_entry(spec, index, i, j);
          m(i, j) = v;
          m(j, i) = std::conj(v);
        }
      return m;
    }
    case EnsembleKind::UnitarilyInvariant: return conjugate_spectrum(haar_unitary(N, spec.seed, index), spec);
    case EnsembleKind::OrthogonallyInvariant: return conjugate_spectrum(haar_orthogonal(N, spec.seed, index), spec);
  }
  throw PreconditionError("unknown ensemble kind");
}

std::vector<Matrix> sample(const EnsembleSpec& spec, std::uint64_t first, std::size_t count) {
  std::vector<Matrix> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = sample(spec, first + k);
  return out;
}

cplx sample_entry(const EnsembleSpec& spec, std::uint64_t index, int i, int j) {
  if (!spec.independent_entries())
    throw PreconditionError("single-entry sampling needs independent entries; " + to_string(spec.kind) + " has none");
  if (i < 0 || j < 0 || i >= spec.N || j >= spec.N) throw std::out_of_range("entry index outside the matrix");
  return independent_entry(spec, index, i, j);
}

Matrix gauge_transform(const Matrix& m, const std::vector<double>& phases) {
  if (static_cast<Eigen::Index>(phases.size()) != m.rows())
    throw PreconditionError("gauge transform needs " + std::to_string(m.rows()) + " phases, got " +
                            std::to_string(phases.size()));
  const Eigen::Index n = m.rows();
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const cplx v = i == j ? m(i, i) : std::polar(1.0, phases[j] - phases[i]) * m(i, j);
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  return out;
}

Matrix shift_diagonal(const Matrix& m, const Profile1D& a) {
  Matrix out = m;
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i) out(i, i) -= a(grid_point(i + 1, n));
  return out;
}

DiagonalProfile diagonal_profile(const EnsembleSpec& spec, std::size_t samples, int jobs) {
  if (samples < 2) throw PreconditionError("diagonal profile needs at least 2 samples");
  const int N = spec.N;
  std::vector<std::vector<double>> diag(samples, std::vector<double>(N));
  parallel_for(samples, jobs, [&](std::size_t s) {
    if (spec.independent_entries()) {
      for (int i = 0; i < N; ++i) diag[s][i] = independent_entry(spec, s, i, i).real();
    } else {
      const Matrix m = sample(spec, s);
      for (int i = 0; i < N; ++i) diag[s][i] = m(i, i).real();
    }
  });
  DiagonalProfile out;
  out.samples = samples;
  for (int i = 0; i < N; ++i) {
    CompensatedSum sum;
    for (std::size_t s = 0; s < samples; ++s) sum.add(diag[s][i]);
    const double mean = sum.value() / static_cast<double>(samples);
    CompensatedSum var;
    for (std::size_t s = 0; s < samples; ++s) var.add((diag[s][i] - mean) * (diag[s][i] - mean));
    out.mean.push_back(mean);
    out.std_error.push_back(std::sqrt(var.value() / static_cast<double>(samples - 1) / static_cast<double>(samples)));
  }
  return out;
}

bool is_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      if (m(i, j) != std::conj(m(j, i))) return false;
  return true;
}

}  // namespace sre
