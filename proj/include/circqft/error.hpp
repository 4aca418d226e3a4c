// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace circqft {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  config = 2,
  precondition = 3,
  numerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// Raised when an operator that must be Hermitian is not.
class NonHermitianError : public PreconditionError {
 public:
  explicit NonHermitianError(double max_asymmetry);
  double max_asymmetry() const noexcept { return max_asymmetry_; }

 private:
  double max_asymmetry_;
};

/// Raised when a propagator drifts away from unitarity.
class PropagatorError : public NumericalError {
 public:
  PropagatorError(double drift, std::size_t steps);
  double drift() const noexcept { return drift_; }
  std::size_t steps() const noexcept { return steps_; }

 private:
  double drift_;
  std::size_t steps_;
};

/// Closed-form formula evaluated at a point where it is undefined.
class FormulaDomainError : public NumericalError {
 public:
  explicit FormulaDomainError(const std::string& what) : NumericalError(what) {}
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace circqft
