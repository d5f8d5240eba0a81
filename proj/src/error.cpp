#include "platoonfd/error.hpp"

namespace platoonfd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::NonUniformSampling: return "NonUniformSampling";
    case ErrorCode::UnknownDriverMode: return "UnknownDriverMode";
    case ErrorCode::RaggedFrame: return "RaggedFrame";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::DegeneratePlatoon: return "DegeneratePlatoon";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::BackwardMotion: return "BackwardMotion";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::ZeroTime: return "ZeroTime";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MixedDriverModes: return "MixedDriverModes";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::ZeroMeanNormalizer: return "ZeroMeanNormalizer";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(message) {}

}  // namespace platoonfd
