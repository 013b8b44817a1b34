#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levy {

enum class ErrorCode {
  DomainError,
  EmptySample,
  NoSignChange,
  MaxIterExceeded,
  NonpositiveVarianceGap,
  ZeroResidual,
  RootOutOfBracket,
  DenominatorNearZero,
  NonpositiveK,
  NonpositiveBrace,
  SingularJacobian,
  NotPositiveDefinite,
  QuadratureFailure,
  InvalidConfig,
  IoError,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `context` names the operation (and,
/// for I/O, the path) so that the CLI can emit {code, message, context}.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {})
      : std::runtime_error(message), code_(code), context_(std::move(context)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message,
                              std::string context = {}) {
  throw Error(code, message, std::move(context));
}

inline void require(bool ok, const char* context, const std::string& message) {
  if (!ok) fail(ErrorCode::DomainError, message, context);
}

/// Non-fatal diagnostics (forced parameters, clamped estimates, zero
/// increments). The default sink writes to stderr; tests may swap it out.
using WarningSink = void (*)(std::string_view);
WarningSink set_warning_sink(WarningSink sink) noexcept;
void warn(std::string_view message);

}  // namespace levy
