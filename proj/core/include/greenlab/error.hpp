#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace greenlab {

enum class ErrorCode {
  DegenerateMap,
  DegreeTooLow,
  RootFindingFailed,
  ExceptionalStart,
  TooManySingularHits,
  InsufficientTailData,
  NoDecayDetected,
  CoboundaryDetected,
  InvalidParams,
  DepthUnsupported,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace greenlab
