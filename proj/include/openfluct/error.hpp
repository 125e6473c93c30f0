#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace openfluct {

enum class ErrorCode {
  NotSquare,
  NotHermitian,
  DomainError,
  DimensionMismatch,
  InvalidBeta,
  InvalidState,
  SupportViolation,
  NotTracePreserving,
  UnknownPreset,
  ParamOutOfRange,
  SupportMismatch,
  ZeroMass,
  UnknownParam,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The message is user-facing and
/// already carries the context needed to reproduce the problem.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace openfluct
