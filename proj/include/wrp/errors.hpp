#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wrp {

enum class ErrorCode {
  InvalidArgument,
  BranchCutViolation,
  AdmissibilityViolation,
  InvalidStrike,
  NonIntegrable,
  RequiresL1,
  DenominatorUnderflow,
  OverflowGuard,
  TruncationCapExceeded,
  InsufficientGrid,
  TailUnbounded,
  CacheMismatch,
  UnsupportedJumpKind,
  GridExtrapolation,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to a structured message and an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wrp
