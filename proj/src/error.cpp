#include "levy/error.hpp"

#include <atomic>
#include <cstdio>

namespace levy {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::NonpositiveVarianceGap: return "NonpositiveVarianceGap";
    case ErrorCode::ZeroResidual: return "ZeroResidual";
    case ErrorCode::RootOutOfBracket: return "RootOutOfBracket";
    case ErrorCode::DenominatorNearZero: return "DenominatorNearZero";
    case ErrorCode::NonpositiveK: return "NonpositiveK";
    case ErrorCode::NonpositiveBrace: return "NonpositiveBrace";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

void stderr_sink(std::string_view message) {
  std::fprintf(stderr, "warning: %.*s\n", static_cast<int>(message.size()), message.data());
}

std::atomic<WarningSink> g_sink{&stderr_sink};

}  // namespace

WarningSink set_warning_sink(WarningSink sink) noexcept {
  return g_sink.exchange(sink ? sink : &stderr_sink);
}

void warn(std::string_view message) { g_sink.load()(message); }

}  // namespace levy
