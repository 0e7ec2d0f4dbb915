#pragma once

#include <stdexcept>
#include <string>

namespace subchan {

// Parameter outside the mathematical domain of an operation (eta <= 0 for
// phase damping, i > k for a binomial, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Mismatched or malformed shapes.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Index outside the truncated Fock space.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Truncation too coarse for the requested accuracy.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem size exceeds a memory guard.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke an operation's input contract (e.g. input not supported on K).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Encoding vectors fail normalization, orthogonality or the ansatz constraint.
struct ConstraintError : std::invalid_argument {
  ConstraintError(const std::string& what, double residual)
      : std::invalid_argument(what), residual(residual) {}
  double residual;
};

struct NormalizationError : ConstraintError {
  using ConstraintError::ConstraintError;
};

struct OrthogonalityError : ConstraintError {
  using ConstraintError::ConstraintError;
};

struct OptimizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed channel or encoding file.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace subchan
