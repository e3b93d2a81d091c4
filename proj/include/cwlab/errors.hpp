#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cwlab {

enum class ErrorCode {
  NoIntersection,
  ConvergenceFailure,
  TruncationTooSmall,
  DegenerateWave,
  QuadratureFailure,
  PositivityViolation,
  BlowUp,
  InsufficientSamples,
  ConfigInvalid,
};

const char* to_string(ErrorCode code);

/// Numerical or configuration failure raised by the library. Argument-contract
/// violations (non-positive volume, etc.) throw std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when v or theta leaves (0, inf). Carries enough context to re-run
/// with a smaller step.
class PositivityViolation : public Error {
 public:
  PositivityViolation(double t, std::size_t node, char field, double value,
                      double suggested_dt, const std::string& detail);

  double time() const noexcept { return t_; }
  std::size_t node() const noexcept { return node_; }
  char field() const noexcept { return field_; }
  double value() const noexcept { return value_; }
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double t_;
  std::size_t node_;
  char field_;
  double value_;
  double suggested_dt_;
};

}  // namespace cwlab
