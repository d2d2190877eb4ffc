#include "error.hpp"

namespace fcg {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositiveForm: return "NonPositiveForm";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::ZeroPreviousGradient: return "ZeroPreviousGradient";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::LineSearchFailed: return "LineSearchFailed";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace fcg
