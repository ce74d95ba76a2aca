#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nestedot {

enum class ErrorCode {
  MalformedRow,
  NonFiniteValue,
  EmptyInput,
  IoFailure,
  InvalidArgument,
  DimensionMismatch,
  InfeasibleWeights,
  SizeCapExceeded,
  LeafNode,
  ModeMismatch,
  ShapeMismatch,
  NotPSD,
  MissingFactor,
  NoConvergence,
  InvalidTimes,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above.
// The message is prefixed with the code name, e.g. "ShapeMismatch: ...".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, std::size_t line);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return to_string(code_); }
  // 1-based input line for ingestion errors.
  std::optional<std::size_t> line() const noexcept { return line_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string detail_;
};

}  // namespace nestedot
