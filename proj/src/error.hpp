#pragma once

#include <stdexcept>
#include <string>

namespace xcut {

enum class ErrorCode {
  InvalidArgument,
  InvalidSpec,
  NonImmersed,
  IndexUnresolved,
  ContinuumIntersection,
  NotNormalized,
  UncleanInput,
  DichotomyViolation,
  NonTransverseContact,
  ComponentLost,
  IndexJump,
  NotCentral,
  DegenerateInput,
  GenerationExhausted,
  StepTooCoarse,
  IoError,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace xcut
