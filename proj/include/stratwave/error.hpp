#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stratwave {

enum class ErrorCode {
  InvalidN,
  InvalidRange,
  UnknownPreset,
  BadParameter,
  GridMismatch,
  UnderResolved,
  WindowContaminated,
  InsufficientDecades,
  NonFinite,
  NoContraction,
  ExcludedParameters,
  ZeroMean,
  ConfigInvalid,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code identifies the contract that
/// was violated; what() carries the context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the time integrators; carries the simulation time at which a
/// non-finite value first appeared.
class NonFiniteError : public Error {
 public:
  NonFiniteError(double time, const std::string& message)
      : Error(ErrorCode::NonFinite, message + " at t=" + std::to_string(time)), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace stratwave
