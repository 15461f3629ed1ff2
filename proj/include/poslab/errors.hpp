#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace poslab {

enum class ErrorCode {
  FloatAmbiguous,
  NotTransverse,
  NonPositiveParameter,
  NotInOpenSemigroup,
  FloatModeUnsupported,
  EmptyGeneratorSet,
  NotInDiamond,
  DegenerateSlackSet,
  NestingNotCertified,
  NotCauchyAtDepth,
  PingPongViolated,
  PositivityFailed,
  UnknownSuite,
  ConfigInvalid,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// the CLI can map it onto a stable JSON error field.
class PoslabError : public std::runtime_error {
 public:
  PoslabError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by limit detection; keeps the last successive distance.
class NotCauchyError : public PoslabError {
 public:
  NotCauchyError(double residual, const std::string& what)
      : PoslabError(ErrorCode::NotCauchyAtDepth, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw PoslabError(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace poslab
