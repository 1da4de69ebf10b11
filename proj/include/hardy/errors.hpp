#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hardy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (x = 0, λ ≤ 0, p ≥ Q, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed argument (empty sample list, a ≥ b, negative ε, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A group/norm combination that cannot be built (Koranyi on the wrong weights, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// The request needs more than the object provides (analytic derivative order, ...).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// The sharp constant of an inequality is undefined because its coefficient vanishes.
class DegenerateConstantError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Run-file validation failure. Carries every violation found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid configuration:";
    for (const auto& s : issues) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> issues_;
};

}  // namespace hardy
