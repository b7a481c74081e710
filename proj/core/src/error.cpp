#include "gaugeword/error.hpp"

namespace gaugeword {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::RankRequestTooLarge: return "RankRequestTooLarge";
    case ErrorCode::RankDeficientV: return "RankDeficientV";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonpositiveDiagonal: return "NonpositiveDiagonal";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ConstantInput: return "ConstantInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace gaugeword
