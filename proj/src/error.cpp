#include "sgv/error.hpp"

namespace sgv {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveWarp: return "NonPositiveWarp";
    case ErrorCode::BadPoleClosure: return "BadPoleClosure";
    case ErrorCode::PoleEvaluation: return "PoleEvaluation";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::BadArgument: return "BadArgument";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::SignChange: return "SignChange";
    case ErrorCode::NonPositiveGround: return "NonPositiveGround";
    case ErrorCode::EndpointSecondDerivative: return "EndpointSecondDerivative";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorCode::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

}  // namespace sgv
