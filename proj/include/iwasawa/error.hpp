#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwasawa {

/// Failure categories shared by every module. The CLI maps all of them to
/// exit code 1 (input/validation error).
enum class ErrorCode {
  InvalidArgument,
  ParameterMismatch,
  // padic
  ZeroToPrecision,
  PrecisionExhausted,
  TruncationTooShort,
  // progroup
  NotInvertible,
  CapExceeded,
  NotPGroup,
  PrecisionFloor,
  NotUniform,
  // cyclotomic
  NotCoprime,
  EllEqualsP,
  NotStabilized,
  // growth
  NegativeLambda,
  LengthMismatch,
  EmptyHistory,
  MalformedTree,
  IncompleteStepData,
  // scenarios
  MissingSCyc,
  // cli / spec files
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace iwasawa
