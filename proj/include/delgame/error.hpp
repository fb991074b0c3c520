#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace delgame {

using Complex = std::complex<double>;

enum class ErrorCode {
  NonPositiveRate,
  NonIntegerThreshold,
  ThresholdTooSmall,
  InvalidQuery,
  NotClosedFormCapable,
  SingularConstantTerm,
  TruncationTooSmall,
  GridTooCoarse,
  PolesTooClose,
  NonConvergent,
  NoCrossing,
  MaxObservationsExceeded,
  InvalidConfig,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception carrying a typed error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace delgame
