#pragma once

#include <stdexcept>
#include <string>

namespace offmorse {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  EmptyInput,
  BasePointOnCloud,
  EmptyShell,
  TangentPair,
  NotOnBoundary,
  GradientVanishesOnX,
  CreaseStratum,
  GridTooCoarse,
  Unstable,
  TooManyCellsPerLevel,
  ScenarioFormat,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace offmorse
