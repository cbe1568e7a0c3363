#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgv {

enum class ErrorCode {
  NonPositiveWarp,
  BadPoleClosure,
  PoleEvaluation,
  BadExponent,
  BadArgument,
  NoConvergence,
  DegenerateRange,
  SignChange,
  NonPositiveGround,
  EndpointSecondDerivative,
  HypothesisViolation,
  RatioOutOfRange,
  DeltaTooLarge,
  Unreachable,
  EmptySeries,
  ConfigParse,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library is reported through this type; the code lets
// callers (the CLI in particular) map failures to diagnostics and exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sgv
