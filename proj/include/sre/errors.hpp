#pragma once

#include <stdexcept>
#include <string>

namespace sre {

/// An enumeration or search would exceed its configured size cap.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Input outside the mathematical domain of an operation (e.g. a crossing
/// partition handed to the Kreweras complement).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed experiment configuration; `path` is the JSON pointer of the
/// offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace sre
