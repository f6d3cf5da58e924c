#include "offmorse/errors.hpp"

namespace offmorse {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BasePointOnCloud: return "BasePointOnCloud";
    case ErrorCode::EmptyShell: return "EmptyShell";
    case ErrorCode::TangentPair: return "TangentPair";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::GradientVanishesOnX: return "GradientVanishesOnX";
    case ErrorCode::CreaseStratum: return "CreaseStratum";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::TooManyCellsPerLevel: return "TooManyCellsPerLevel";
    case ErrorCode::ScenarioFormat: return "ScenarioFormat";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace offmorse
