#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dgn {

enum class ErrorCode {
  OutOfDomain,
  NonFiniteValue,
  DegenerateJacobian,
  InsufficientSamples,
  BadDimensions,
  BadParams,
  DisconnectedAfterRetries,
  InvalidCombination,
  NoConvergence,
  SingularNormalMatrix,
  ExpansionConditionViolated,
  NoRealEquilibrium,
  InvalidArgument,
  TraceIncomplete,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception; `code()` lets
// callers (and the CLI exit-code mapping) distinguish the cases.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::DisconnectedAfterRetries: return "DisconnectedAfterRetries";
    case ErrorCode::InvalidCombination: return "InvalidCombination";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularNormalMatrix: return "SingularNormalMatrix";
    case ErrorCode::ExpansionConditionViolated: return "ExpansionConditionViolated";
    case ErrorCode::NoRealEquilibrium: return "NoRealEquilibrium";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TraceIncomplete: return "TraceIncomplete";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace dgn
