#include "iwasawa/error.hpp"

namespace iwasawa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParameterMismatch: return "ParameterMismatch";
    case ErrorCode::ZeroToPrecision: return "ZeroToPrecision";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::TruncationTooShort: return "TruncationTooShort";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotPGroup: return "NotPGroup";
    case ErrorCode::PrecisionFloor: return "PrecisionFloor";
    case ErrorCode::NotUniform: return "NotUniform";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::EllEqualsP: return "EllEqualsP";
    case ErrorCode::NotStabilized: return "NotStabilized";
    case ErrorCode::NegativeLambda: return "NegativeLambda";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyHistory: return "EmptyHistory";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::IncompleteStepData: return "IncompleteStepData";
    case ErrorCode::MissingSCyc: return "MissingSCyc";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace iwasawa
