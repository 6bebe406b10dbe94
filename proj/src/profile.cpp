#include "sre/profile.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "sre/errors.hpp"

namespace sre {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, const std::string& path, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path + "/" + key, "missing number");
  }
  if (!j.at(key).is_number()) throw ConfigError(path + "/" + key, "expected a number");
  return j.at(key).get<double>();
}

std::string type_of(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "profile must be a number or an object");
  if (!j.contains("type") || !j.at("type").is_string()) throw ConfigError(path + "/type", "missing profile type");
  return j.at("type").get<std::string>();
}

double interpolate(const std::vector<double>& v, double x) {
  if (v.size() == 1) return v[0];
  const double t = std::clamp(x, 0.0, 1.0) * static_cast<double>(v.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(t), v.size() - 2);
  const double f = t - static_cast<double>(k);
  return v[k] * (1.0 - f) + v[k + 1] * f;
}

}  // namespace

// ---------------------------------------------------------------- 1D

Profile1D Profile1D::constant(double c) {
  Profile1D p;
  p.p_ = {c};
  return p;
}

Profile1D Profile1D::linear(double a, double b) {
  Profile1D p;
  p.kind_ = Kind::Linear;
  p.p_ = {a, b};
  return p;
}

Profile1D Profile1D::step(double at, double lo, double hi) {
  Profile1D p;
  p.kind_ = Kind::Step;
  p.p_ = {at, lo, hi};
  return p;
}

Profile1D Profile1D::gaussian_bump(double center, double width, double height, double base) {
  if (!(width > 0)) throw PreconditionError("gaussian bump width must be positive");
  Profile1D p;
  p.kind_ = Kind::GaussianBump;
  p.p_ = {center, width, height, base};
  return p;
}

Profile1D Profile1D::tabulated(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("tabulated profile needs at least one value");
  Profile1D p;
  p.kind_ = Kind::Tabulated;
  p.p_ = std::move(values);
  return p;
}

double Profile1D::operator()(double x) const {
  switch (kind_) {
    case Kind::Constant: return p_[0];
    case Kind::Linear: return p_[0] + p_[1] * x;
    case Kind::Step: return x >= p_[0] ? p_[2] : p_[1];
    case Kind::GaussianBump: {
      const double d = (x - p_[0]) / p_[1];
      return p_[3] + p_[2] * std::exp(-0.5 * d * d);
    }
    case Kind::Tabulated: return interpolate(p_, x);
  }
  return 0.0;
}

Profile1D Profile1D::from_json(const json& j, const std::string& path) {
  if (j.is_number()) return constant(j.get<double>());
  const auto type = type_of(j, path);
  if (type == "constant") return constant(number(j, "value", path));
  if (type == "linear") return linear(number(j, "a", path, 0.0), number(j, "b", path, 1.0));
  if (type == "step") return step(number(j, "at", path, 0.5), number(j, "lo", path), number(j, "hi", path));
  if (type == "sign") return sign();
  if (type == "gaussian_bump") {
    const double width = number(j, "width", path);
    if (!(width > 0)) throw ConfigError(path + "/width", "must be positive");
    return gaussian_bump(number(j, "center", path, 0.5), width, number(j, "height", path, 1.0),
                         number(j, "base", path, 0.0));
  }
  if (type == "tabulated") {
    if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty())
      throw ConfigError(path + "/values", "expected a nonempty array of numbers");
    std::vector<double> v;
    for (std::size_t k = 0; k < j.at("values").size(); ++k) {
      const auto& e = j.at("values")[k];
      if (!e.is_number()) throw ConfigError(path + "/values/" + std::to_string(k), "expected a number");
      v.push_back(e.get<double>());
    }
    return tabulated(std::move(v));
  }
  throw ConfigError(path + "/type", "unknown profile type '" + type + "'");
}

json Profile1D::to_json() const {
  switch (kind_) {
    case Kind::Constant: return {{"type", "constant"}, {"value", p_[0]}};
    case Kind::Linear: return {{"type", "linear"}, {"a", p_[0]}, {"b", p_[1]}};
    case Kind::Step: return {{"type", "step"}, {"at", p_[0]}, {"lo", p_[1]}, {"hi", p_[2]}};
    case Kind::GaussianBump:
      return {{"type", "gaussian_bump"}, {"center", p_[0]}, {"width", p_[1]}, {"height", p_[2]}, {"base", p_[3]}};
    case Kind::Tabulated: return {{"type", "tabulated"}, {"values", p_}};
  }
  return nullptr;
}

std::string Profile1D::describe() const { return to_json().dump(); }

// ---------------------------------------------------------------- 2D

Profile2D Profile2D::constant(double c) {
  Profile2D p;
  p.p_ = {c};
  return p;
}

Profile2D Profile2D::bilinear(double a, double b) {
  Profile2D p;
  p.kind_ = Kind::Bilinear;
  p.p_ = {a, b};
  return p;
}

Profile2D Profile2D::step(double at, double lo, double hi) {
  Profile2D p;
  p.kind_ = Kind::Step;
  p.p_ = {at, lo, hi};
  return p;
}

Profile2D Profile2D::band(double base, double height, double width) {
  if (!(width > 0)) throw PreconditionError("band width must be positive");
  Profile2D p;
  p.kind_ = Kind::Band;
  p.p_ = {base, height, width};
  return p;
}

Profile2D Profile2D::tabulated(std::vector<std::vector<double>> values) {
  const std::size_t n = values.size();
  if (n == 0) throw PreconditionError("tabulated profile needs at least one row");
  for (const auto& row : values)
    if (row.size() != n) throw PreconditionError("tabulated 2D profile must be square");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (values[a][b] != values[b][a])
        throw PreconditionError("tabulated 2D profile must be symmetric (entry " + std::to_string(a) + "," +
                                std::to_string(b) + ")");
  Profile2D p;
  p.kind_ = Kind::Tabulated;
  p.table_ = std::move(values);
  return p;
}

double Profile2D::operator()(double x, double y) const {
  switch (kind_) {
    case Kind::Constant: return p_[0];
    case Kind::Bilinear: return p_[0] + p_[1] * x * y;
    case Kind::Step: return x + y >= p_[0] ? p_[2] : p_[1];
    case Kind::Band: {
      const double d = (x - y) / p_[2];
      return p_[0] + p_[1] * std::exp(-0.5 * d * d);
    }
    case Kind::Tabulated: {
      const std::size_t n = table_.size();
      if (n == 1) return table_[0][0];
      const double tx = std::clamp(x, 0.0, 1.0) * static_cast<double>(n - 1);
      const auto kx = std::min(static_cast<std::size_t>(tx), n - 2);
      const double fx = tx - static_cast<double>(kx);
      return interpolate(table_[kx], y) * (1.0 - fx) + interpolate(table_[kx + 1], y) * fx;
    }
  }
  return 0.0;
}

Profile2D Profile2D::from_json(const json& j, const std::string& path) {
  if (j.is_number()) return constant(j.get<double>());
  const auto type = type_of(j, path);
  if (type == "constant") return constant(number(j, "value", path));
  if (type == "bilinear") return bilinear(number(j, "a", path, 0.0), number(j, "b", path, 1.0));
  if (type == "step") return step(number(j, "at", path, 1.0), number(j, "lo", path), number(j, "hi", path));
  if (type == "band") {
    const double width = number(j, "width", path);
    if (!(width > 0)) throw ConfigError(path + "/width", "must be positive");
    return band(number(j, "base", path, 0.0), number(j, "height", path, 1.0), width);
  }
  if (type == "tabulated") {
    try {
      return tabulated(j.at("values").get<std::vector<std::vector<double>>>());
    } catch (const PreconditionError& e) {
      throw ConfigError(path + "/values", e.what());
    } catch (const json::exception&) {
      throw ConfigError(path + "/values", "expected a square array of numbers");
    }
  }
  throw ConfigError(path + "/type", "unknown profile type '" + type + "'");
}

json Profile2D::to_json() const {
  switch (kind_) {
    case Kind::Constant: return {{"type", "constant"}, {"value", p_[0]}};
    case Kind::Bilinear: return {{"type", "bilinear"}, {"a", p_[0]}, {"b", p_[1]}};
    case Kind::Step: return {{"type", "step"}, {"at", p_[0]}, {"lo", p_[1]}, {"hi", p_[2]}};
    case Kind::Band: return {{"type", "band"}, {"base", p_[0]}, {"height", p_[1]}, {"width", p_[2]}};
    case Kind::Tabulated: return {{"type", "tabulated"}, {"values", table_}};
  }
  return nullptr;
}

std::string Profile2D::describe() const { return to_json().dump(); }

}  // namespace sre
