#pragma once

// Profile functions on [0,1] and [0,1]^2 (variance profiles, spectra,
// diagonal shifts, entry-wise coefficients). Serializable as JSON objects
// {"type": ..., params...}; a bare number means a constant.

#include <string>
#include <vector>

#include "json.hpp"

namespace sre {

class Profile1D {
 public:
  enum class Kind { Constant, Linear, Step, GaussianBump, Tabulated };

  Profile1D() = default;
  static Profile1D constant(double c);
  /// a + b x
  static Profile1D linear(double a, double b);
  /// lo for x < at, hi for x >= at.
  static Profile1D step(double at, double lo, double hi);
  /// sign(x - 1/2) as a step from -1 to +1.
  static Profile1D sign() { return step(0.5, -1.0, 1.0); }
  /// base + height exp(-(x - center)^2 / (2 width^2))
  static Profile1D gaussian_bump(double center, double width, double height, double base = 0.0);
  /// Values on the uniform grid x_k = k/(size-1), linear interpolation.
  static Profile1D tabulated(std::vector<double> values);

  /// `path` locates the value in the enclosing document for error messages.
  static Profile1D from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;

  double operator()(double x) const;
  Kind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return kind_ == Kind::Constant; }
  /// Exact zero everywhere.
  bool is_zero() const noexcept { return kind_ == Kind::Constant && p_[0] == 0.0; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> p_{0.0};
};

class Profile2D {
 public:
  enum class Kind { Constant, Bilinear, Step, Band, Tabulated };

  Profile2D() = default;
  static Profile2D constant(double c);
  /// a + b x y
  static Profile2D bilinear(double a, double b);
  /// lo for x + y < at, hi otherwise.
  static Profile2D step(double at, double lo, double hi);
  /// base + height exp(-(x - y)^2 / (2 width^2))
  static Profile2D band(double base, double height, double width);
  /// Square table on the uniform grid, bilinear interpolation; must be symmetric.
  static Profile2D tabulated(std::vector<std::vector<double>> values);

  static Profile2D from_json(const nlohmann::json& j, const std::string& path = "");
  nlohmann::json to_json() const;

  double operator()(double x, double y) const;
  Kind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return kind_ == Kind::Constant; }
  bool is_zero() const noexcept { return kind_ == Kind::Constant && p_[0] == 0.0; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> p_{0.0};
  std::vector<std::vector<double>> table_;
};

}  // namespace sre
