#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaugeword {

// Failure categories shared by every module. The CLI maps all of them to
// exit status 1; usage errors are handled before any of these can occur.
enum class ErrorCode {
  SingularInput,
  SingularTransform,
  RankRequestTooLarge,
  RankDeficientV,
  NotPositiveDefinite,
  NonpositiveDiagonal,
  DegenerateSpectrum,
  ShapeMismatch,
  InvalidArgument,
  EmptyVocabulary,
  ZeroVector,
  ConstantInput,
  LengthMismatch,
  TooFewPairs,
  NonFiniteObjective,
  BadK,
  MalformedLine,
  DimensionMismatch,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal condition attached to a result (e.g. a degenerate spectrum that
// leaves the canonical form non-unique).
struct Warning {
  ErrorCode code;
  std::string message;
};

}  // namespace gaugeword
