#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bsl {

enum class ErrorCode {
  InvalidArgument,
  GroupMismatch,
  UnsupportedGroup,
  UnknownId,
  NotInvariant,
  IllDefined,
  GridMismatch,
  NotCohomogeneityOne,
  NonpositiveWeight,
  ConvergenceFailure,
  ZeroVector,
  FingerprintMismatch,
  MalformedInput,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library is reported through this exception; callers
/// that need to branch (the CLI exit-code contract) switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bsl
