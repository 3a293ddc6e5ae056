#pragma once

// Error taxonomy shared by the whole library. Every precondition violation or
// numerical failure is reported as an Error carrying one of the codes below;
// the CLI maps codes to exit statuses.

#include <stdexcept>
#include <string>

namespace hesssym {

enum class ErrorCode {
  ZeroVector,
  ParallelRows,
  DomainError,
  UnsupportedK,
  UnsupportedShape,
  PatternMismatch,
  NoConvergence,
  SingularRestrictedHessian,
  RankDeficientRepresentatives,
  EquivarianceViolation,
  NotSymmetric,
  ZeroProbeEntry,
  LengthMismatch,
  EmptyRange,
  ConfigError,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what_arg);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& msg);

}  // namespace hesssym
