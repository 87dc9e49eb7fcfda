#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blockspec {

enum class ErrorCode {
  kInvalidAlpha,
  kInvalidG,
  kInvalidD,
  kInvalidStructure,
  kIndexOutOfRange,
  kInvalidArgument,
  kNoConvergence,
  kNonPositiveMatrix,
  kNotConverged,
  kZeroZOutsideSupport,
  kSolverFailure,
  kEigensolverFailure,
  kParseError,
  kValidationError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// Base exception for every failure raised by the library. The code is stable
// and is what callers (and the CLI exit-code mapping) should switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blockspec
