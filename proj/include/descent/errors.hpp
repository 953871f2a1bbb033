#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace descent {

enum class ErrorCode {
  InputError,
  ZeroRadicand,
  DivisionByZero,
  TowerMismatch,
  NotGalois,
  RepeatedPoints,
  UndefinedCrossRatio,
  UnsupportedCyclotomy,
  DegreeTooSmall,
  UnrecognizedGroup,
  InternalInconsistency,
  NonCyclicAut,
  DescentFailure,
  UnsupportedAut,
  NonElementaryGaloisQuotient,
  SingularForm,
  FactorizationTooLarge,
  SearchExhausted,
  PointNotOnConic,
  ModelConstructionFailed,
  TangentLine,
  SplitSymbol,
  BadDegree,
  RetriesExhausted,
  NotAnInvolution,
  HypothesesNotMet,
  GenusTooSmall,
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

// Throws Error(InternalInconsistency) when a checked mathematical fact fails.
inline void check(bool condition, const char* what) {
  if (!condition) throw Error(ErrorCode::InternalInconsistency, what);
}

}  // namespace descent
