#include "openfluct/error.hpp"

namespace openfluct {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidBeta: return "InvalidBeta";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::UnknownParam: return "UnknownParam";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Error";
}

}  // namespace openfluct
