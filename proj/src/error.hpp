#pragma once

#include <stdexcept>
#include <string>

namespace fcg {

enum class ErrorCode {
  IndexOutOfRange = 1,
  DuplicateEntry,
  OrderMismatch,
  DimensionMismatch,
  NonPositiveForm,
  ZeroVector,
  InfeasiblePoint,
  ZeroPreviousGradient,
  ZeroDirection,
  LineSearchFailed,
  InvalidSpec,
  ParseError,
  ConfigError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fcg
