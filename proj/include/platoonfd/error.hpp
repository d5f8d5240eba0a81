#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace platoonfd {

enum class ErrorCode {
  InvalidArgument,
  MissingColumn,
  MalformedInput,
  NonUniformSampling,
  UnknownDriverMode,
  RaggedFrame,
  TooFewFrames,
  DegeneratePlatoon,
  NonPositiveInput,
  BackwardMotion,
  EmptyRegion,
  ZeroTime,
  NonPositiveValue,
  EmptyInput,
  MixedDriverModes,
  GridMismatch,
  OutOfDomain,
  DegenerateGeometry,
  ZeroMeanNormalizer,
  Infeasible,
  IndexMismatch,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  [[nodiscard]] const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace platoonfd
