#include "sco/common.hpp"

namespace sco {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::InvalidSparsity: return "InvalidSparsity";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::IncompatibleVertex: return "IncompatibleVertex";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewInstances: return "TooFewInstances";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::InnerSolveFailed: return "InnerSolveFailed";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::NonPositiveGap: return "NonPositiveGap";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sco
