#include "sre/transform.hpp"

#include <cmath>
#include <sstream>

#include "sre/errors.hpp"
#include "sre/parallel.hpp"

namespace sre {

// ---------------------------------------------------------------- polynomials

PolySpec PolySpec::monomial(int power, double coefficient) {
  if (power < 1) throw PreconditionError("monomial power must be at least 1");
  PolySpec p;
  p.coefficients.assign(static_cast<std::size_t>(power) + 1, 0.0);
  p.coefficients.back() = coefficient;
  return p;
}

void PolySpec::validate() const {
  if (coefficients.size() < 2) throw PreconditionError("polynomial degree must be at least 1");
  if (coefficients.back() == 0.0) throw PreconditionError("polynomial leading coefficient must be nonzero");
}

PolySpec PolySpec::from_json(const nlohmann::json& j, const std::string& path) {
  PolySpec p;
  if (j.is_object() && j.contains("monomial")) {
    if (!j.at("monomial").is_number_integer() || j.at("monomial").get<int>() < 1)
      throw ConfigError(path + "/monomial", "expected a positive integer power");
    return monomial(j.at("monomial").get<int>());
  }
  if (!j.is_object() || !j.contains("coefficients")) throw ConfigError(path, "expected {\"coefficients\": [...]}");
  try {
    p.coefficients = j.at("coefficients").get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + "/coefficients", "expected an array of numbers");
  }
  try {
    p.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(path + "/coefficients", e.what());
  }
  return p;
}

nlohmann::json PolySpec::to_json() const { return {{"coefficients", coefficients}}; }

std::string PolySpec::describe() const {
  std::ostringstream os;
  bool first = true;
  for (int d = degree(); d >= 0; --d) {
    const double a = coefficients[d];
    if (a == 0.0) continue;
    if (!first) os << (a < 0 ? " - " : " + ");
    else if (a < 0) os << '-';
    const double mag = std::abs(a);
    if (mag != 1.0 || d == 0) os << mag;
    if (d >= 1) os << 'M';
    if (d >= 2) os << '^' << d;
    first = false;
  }
  return first ? "0" : os.str();
}

Matrix poly_apply(const Matrix& m, const PolySpec& p) {
  p.validate();
  const Eigen::Index n = m.rows();
  Matrix acc = Matrix::Identity(n, n) * p.coefficients.back();
  for (int d = p.degree() - 1; d >= 0; --d) {
    acc = acc * m;
    acc.diagonal().array() += p.coefficients[d];
  }
  // Mirror the upper triangle so the result is exactly Hermitian.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) acc(j, i) = std::conj(acc(i, j));
    acc(j, j) = cplx(acc(j, j).real(), 0.0);
  }
  return acc;
}

// ---------------------------------------------------------------- entry-wise

EntrywiseSpec EntrywiseSpec::monomial(int power, double coefficient) {
  if (power < 0) throw PreconditionError("entry-wise power must be nonnegative");
  EntrywiseSpec f;
  f.coefficients.assign(static_cast<std::size_t>(power) + 1, Profile2D::constant(0.0));
  f.coefficients.back() = Profile2D::constant(coefficient);
  return f;
}

EntrywiseSpec EntrywiseSpec::from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "entry-wise transform must be an object");
  EntrywiseSpec f;
  if (j.contains("monomial")) {
    if (!j.at("monomial").is_number_integer() || j.at("monomial").get<int>() < 0)
      throw ConfigError(path + "/monomial", "expected a nonnegative integer power");
    f = monomial(j.at("monomial").get<int>());
  } else {
    if (!j.contains("coefficients") || !j.at("coefficients").is_array() || j.at("coefficients").empty())
      throw ConfigError(path + "/coefficients", "expected a nonempty array of profiles");
    const auto& c = j.at("coefficients");
    for (std::size_t d = 0; d < c.size(); ++d)
      f.coefficients.push_back(Profile2D::from_json(c[d], path + "/coefficients/" + std::to_string(d)));
  }
  if (j.contains("diagonal")) {
    const auto policy = j.at("diagonal").is_string() ? j.at("diagonal").get<std::string>() : "";
    if (policy == "zero")
      f.diagonal = DiagonalPolicy::Zero;
    else if (policy == "same")
      f.diagonal = DiagonalPolicy::Same;
    else
      throw ConfigError(path + "/diagonal", "expected \"zero\" or \"same\"");
  }
  return f;
}

nlohmann::json EntrywiseSpec::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (const auto& p : coefficients) c.push_back(p.to_json());
  return {{"coefficients", c}, {"diagonal", diagonal == DiagonalPolicy::Zero ? "zero" : "same"}};
}

double EntrywiseSpec::f(double x, double y, double u) const {
  double acc = 0.0;
  for (int d = degree(); d >= 0; --d) acc = acc * u + coefficients[d](x, y);
  return acc;
}

cplx EntrywiseSpec::apply(cplx m, int i, int j, int N) const {
  if (i == j && diagonal == DiagonalPolicy::Zero) return {};
  const double u = static_cast<double>(N) * std::norm(m);
  return m * f(grid_point(i + 1, N), grid_point(j + 1, N), u);
}

std::string EntrywiseSpec::describe() const {
  std::ostringstream os;
  os << "Y=M*f(N|M|^2), f=";
  for (int d = 0; d <= degree(); ++d) os << (d ? "+" : "") << coefficients[d].describe() << "*u^" << d;
  os << ", diagonal=" << (diagonal == DiagonalPolicy::Zero ? "zero" : "same");
  return os.str();
}

Matrix entrywise_apply(const Matrix& m, const EntrywiseSpec& f) {
  const int n = static_cast<int>(m.rows());
  Matrix y(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      const double x1 = grid_point(i + 1, n), x2 = grid_point(j + 1, n);
      for (const auto& c : f.coefficients) {
        const double a = c(x1, x2), b = c(x2, x1);
        if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)))
          throw PreconditionError("entry-wise coefficient " + c.describe() +
                                  " is not symmetric in (x, y); the result would not be Hermitian");
      }
      const cplx v = f.apply(m(i, j), i, j, n);
      y(i, j) = v;
      y(j, i) = std::conj(v);
    }
  for (int i = 0; i < n; ++i) y(i, i) = cplx(y(i, i).real(), 0.0);
  return y;
}

// ---------------------------------------------------------------- steps

TransformStep TransformStep::polynomial(PolySpec p) {
  p.validate();
  TransformStep s;
  s.kind = Kind::Poly;
  s.poly = std::move(p);
  return s;
}

TransformStep TransformStep::entry_wise(EntrywiseSpec f) {
  TransformStep s;
  s.kind = Kind::Entrywise;
  s.entrywise = std::move(f);
  return s;
}

TransformStep TransformStep::diagonal_shift(Profile1D a) {
  TransformStep s;
  s.kind = Kind::Shift;
  s.shift = std::move(a);
  return s;
}

TransformStep TransformStep::from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) throw ConfigError(path, "transform must be one of {poly|entrywise|shift: ...}");
  if (j.contains("poly")) return polynomial(PolySpec::from_json(j.at("poly"), path + "/poly"));
  if (j.contains("entrywise")) return entry_wise(EntrywiseSpec::from_json(j.at("entrywise"), path + "/entrywise"));
  if (j.contains("shift")) return diagonal_shift(Profile1D::from_json(j.at("shift"), path + "/shift"));
  throw ConfigError(path, "unknown transform '" + j.begin().key() + "'");
}

nlohmann::json TransformStep::to_json() const {
  switch (kind) {
    case Kind::Poly: return {{"poly", poly.to_json()}};
    case Kind::Entrywise: return {{"entrywise", entrywise.to_json()}};
    case Kind::Shift: return {{"shift", shift.to_json()}};
  }
  return nullptr;
}

std::string TransformStep::describe() const {
  switch (kind) {
    case Kind::Poly: return "P(M)=" + poly.describe();
    case Kind::Entrywise: return entrywise.describe();
    case Kind::Shift: return "M-diag(" + shift.describe() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- model

MatrixModel::MatrixModel(EnsembleSpec ensemble, std::vector<TransformStep> steps)
    : ensemble_(std::move(ensemble)), steps_(std::move(steps)) {
  ensemble_.validate();
}

MatrixModel MatrixModel::with_size(int n) const { return MatrixModel(ensemble_.with_size(n), steps_); }

MatrixModel MatrixModel::then(TransformStep step) const {
  auto steps = steps_;
  steps.push_back(std::move(step));
  return MatrixModel(ensemble_, std::move(steps));
}

Matrix MatrixModel::sample(std::uint64_t index) const {
  Matrix m = sre::sample(ensemble_, index);
  for (const auto& s : steps_) {
    switch (s.kind) {
      case TransformStep::Kind::Poly: m = poly_apply(m, s.poly); break;
      case TransformStep::Kind::Entrywise: m = entrywise_apply(m, s.entrywise); break;
      case TransformStep::Kind::Shift: m = shift_diagonal(m, s.shift); break;
    }
  }
  return m;
}

bool MatrixModel::entry_local() const noexcept {
  if (!ensemble_.independent_entries()) return false;
  for (const auto& s : steps_)
    if (s.kind == TransformStep::Kind::Poly) return false;
  return true;
}

cplx MatrixModel::entry(std::uint64_t index, int i, int j) const {
  if (!entry_local()) throw PreconditionError("entry access needs an entry-local model: " + describe());
  cplx v = sample_entry(ensemble_, index, i, j);
  for (const auto& s : steps_) {
    if (s.kind == TransformStep::Kind::Entrywise) {
      // Mirror through the upper triangle, as entrywise_apply does.
      if (i <= j)
        v = s.entrywise.apply(v, i, j, N());
      else
        v = std::conj(s.entrywise.apply(std::conj(v), j, i, N()));
      if (i == j) v = cplx(v.real(), 0.0);
    } else if (s.kind == TransformStep::Kind::Shift && i == j) {
      v -= s.shift(grid_point(i + 1, N()));
    }
  }
  return v;
}

std::string MatrixModel::describe() const {
  std::string out = ensemble_.name();
  for (const auto& s : steps_) out += " | " + s.describe();
  return out;
}

nlohmann::json MatrixModel::to_json() const {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : steps_) steps.push_back(s.to_json());
  return {{"ensemble", ensemble_.to_json()}, {"transforms", steps}};
}

DiagonalProfile diagonal_profile(const MatrixModel& model, std::size_t samples, int jobs) {
  if (samples < 2) throw PreconditionError("diagonal profile needs at least 2 samples");
  const int N = model.N();
  std::vector<std::vector<double>> diag(samples, std::vector<double>(N));
  parallel_for(samples, jobs, [&](std::size_t s) {
    if (model.entry_local()) {
      for (int i = 0; i < N; ++i) diag[s][i] = model.entry(s, i, i).real();
    } else {
      const Matrix m = model.sample(s);
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

void require_centered(const MatrixModel& model, std::size_t samples, double z, int jobs) {
  const auto profile = diagonal_profile(model, samples, jobs);
  for (std::size_t i = 0; i < profile.mean.size(); ++i) {
    const double m = profile.mean[i], se = profile.std_error[i];
    if (std::abs(m) > z * se + 1e-12) {
      std::ostringstream os;
      os << "entry-wise transforms assume a centered ensemble, E[M_ii] = 0; row " << i + 1 << " of " << model.describe()
         << " has mean " << m << " +- " << se;
      throw PreconditionError(os.str());
    }
  }
}

}  // namespace sre
