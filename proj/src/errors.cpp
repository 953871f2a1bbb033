#include "descent/errors.hpp"

namespace descent {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InputError: return "InputError";
    case ErrorCode::ZeroRadicand: return "ZeroRadicand";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::TowerMismatch: return "TowerMismatch";
    case ErrorCode::NotGalois: return "NotGalois";
    case ErrorCode::RepeatedPoints: return "RepeatedPoints";
    case ErrorCode::UndefinedCrossRatio: return "UndefinedCrossRatio";
    case ErrorCode::UnsupportedCyclotomy: return "UnsupportedCyclotomy";
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::UnrecognizedGroup: return "UnrecognizedGroup";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::NonCyclicAut: return "NonCyclicAut";
    case ErrorCode::DescentFailure: return "DescentFailure";
    case ErrorCode::UnsupportedAut: return "UnsupportedAut";
    case ErrorCode::NonElementaryGaloisQuotient: return "NonElementaryGaloisQuotient";
    case ErrorCode::SingularForm: return "SingularForm";
    case ErrorCode::FactorizationTooLarge: return "FactorizationTooLarge";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::PointNotOnConic: return "PointNotOnConic";
    case ErrorCode::ModelConstructionFailed: return "ModelConstructionFailed";
    case ErrorCode::TangentLine: return "TangentLine";
    case ErrorCode::SplitSymbol: return "SplitSymbol";
    case ErrorCode::BadDegree: return "BadDegree";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::NotAnInvolution: return "NotAnInvolution";
    case ErrorCode::HypothesesNotMet: return "HypothesesNotMet";
    case ErrorCode::GenusTooSmall: return "GenusTooSmall";
  }
  return "Unknown";
}

}  // namespace descent
