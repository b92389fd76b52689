#pragma once

#include <stdexcept>
#include <string>

namespace holo {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A unitary was required but ‖U†U − I‖_max exceeded tolerance.
class NonUnitary : public ValidationError {
 public:
  NonUnitary(const std::string& what, double deviation)
      : ValidationError(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

class NonHermitian : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Problem exceeds the brute-force caps (joint dim 2^12, 16 binary nodes, ...).
class CapacityExceeded : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Thermodynamic ledger cannot fund a memory write.
class InsufficientFreeEnergy : public Error {
 public:
  using Error::Error;
};

/// A run detected a broken invariant (bound breach, ledger imbalance, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// A text-format document failed to parse.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace holo
