#pragma once

#include <stdexcept>
#include <string>

namespace fracrelax {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition (bad parameters, length
/// mismatches, out-of-range arguments).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParameterOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failures that are not the caller's fault.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A weak derivative would push an exponent to <= -1.
class DerivativeLeavesAlgebra : public NumericError {
 public:
  DerivativeLeavesAlgebra(const std::string& what, int stage)
      : NumericError(what), stage_(stage) {}
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

class EvaluationAtZeroUndefined : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonConvergence : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace fracrelax
