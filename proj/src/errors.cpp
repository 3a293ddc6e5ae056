#include "hesssym/errors.hpp"

namespace hesssym {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ParallelRows: return "ParallelRows";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnsupportedK: return "UnsupportedK";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularRestrictedHessian: return "SingularRestrictedHessian";
    case ErrorCode::RankDeficientRepresentatives: return "RankDeficientRepresentatives";
    case ErrorCode::EquivarianceViolation: return "EquivarianceViolation";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ZeroProbeEntry: return "ZeroProbeEntry";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& what_arg)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what_arg), code_(code) {}

void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

}  // namespace hesssym
