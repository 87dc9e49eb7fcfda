#include "blockspec/error.hpp"

namespace blockspec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidAlpha: return "InvalidAlpha";
    case ErrorCode::kInvalidG: return "InvalidG";
    case ErrorCode::kInvalidD: return "InvalidD";
    case ErrorCode::kInvalidStructure: return "InvalidStructure";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNonPositiveMatrix: return "NonPositiveMatrix";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kZeroZOutsideSupport: return "ZeroZOutsideSupport";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kEigensolverFailure: return "EigensolverFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace blockspec
