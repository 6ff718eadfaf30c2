#include "hiermtl/error.hpp"

namespace hiermtl {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownTaskKind: return "UnknownTaskKind";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeLambda: return "NegativeLambda";
    case ErrorCode::NegativeTau: return "NegativeTau";
    case ErrorCode::BacktrackOverflow: return "BacktrackOverflow";
    case ErrorCode::MultiplierBelowOne: return "MultiplierBelowOne";
    case ErrorCode::NonPositiveKappa: return "NonPositiveKappa";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ConstantTruth: return "ConstantTruth";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hiermtl
