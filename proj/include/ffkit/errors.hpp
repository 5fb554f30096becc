#pragma once

#include <stdexcept>
#include <string>

namespace ffkit {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invariant violations, malformed files, out-of-domain flags.
/// The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& field, const std::string& what)
      : ValidationError("line " + std::to_string(line) + (field.empty() ? "" : ", field '" + field + "'") +
                        ": " + what),
        line_(line),
        field_(field) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class DurationMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure (root not bracketed, log branch risk, ill-conditioning...).
/// The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SearchFailureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BranchRiskError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnsupportedOrderError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UndefinedPhaseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ControllabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AmplitudeLimitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ffkit
