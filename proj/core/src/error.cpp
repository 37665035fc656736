#include "greenlab/error.hpp"

namespace greenlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateMap: return "DegenerateMap";
    case ErrorCode::DegreeTooLow: return "DegreeTooLow";
    case ErrorCode::RootFindingFailed: return "RootFindingFailed";
    case ErrorCode::ExceptionalStart: return "ExceptionalStart";
    case ErrorCode::TooManySingularHits: return "TooManySingularHits";
    case ErrorCode::InsufficientTailData: return "InsufficientTailData";
    case ErrorCode::NoDecayDetected: return "NoDecayDetected";
    case ErrorCode::CoboundaryDetected: return "CoboundaryDetected";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DepthUnsupported: return "DepthUnsupported";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace greenlab
