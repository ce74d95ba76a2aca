#include "nestedot/error.hpp"

namespace nestedot {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InfeasibleWeights: return "InfeasibleWeights";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::LeafNode: return "LeafNode";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::MissingFactor: return "MissingFactor";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidTimes: return "InvalidTimes";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(std::string(to_string(code)) + ": line " + std::to_string(line) + ": " +
                         message),
      code_(code),
      line_(line),
      detail_("line " + std::to_string(line) + ": " + message) {}

}  // namespace nestedot
