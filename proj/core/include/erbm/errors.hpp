#pragma once

#include <stdexcept>
#include <string>

namespace erbm {

enum class ErrorCode {
  NonSimpleCurve,
  DegenerateCurve,
  HoleOutsideOuter,
  HolesIntersect,
  ClearanceTooSmall,
  SolverSingular,
  IllConditioned,
  PoleTooCloseToBoundary,
  PointsTooClose,
  ArcsNotDisjoint,
  CurveTouchesBoundary,
  PathTooCloseToBoundary,
  PlateauLevel,
  GradientVanished,
  PlateauDegeneracy,
  MaxStepsExceeded,
  ParseError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a typed error code plus a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSimpleCurve: return "NonSimpleCurve";
    case ErrorCode::DegenerateCurve: return "DegenerateCurve";
    case ErrorCode::HoleOutsideOuter: return "HoleOutsideOuter";
    case ErrorCode::HolesIntersect: return "HolesIntersect";
    case ErrorCode::ClearanceTooSmall: return "ClearanceTooSmall";
    case ErrorCode::SolverSingular: return "SolverSingular";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::PoleTooCloseToBoundary: return "PoleTooCloseToBoundary";
    case ErrorCode::PointsTooClose: return "PointsTooClose";
    case ErrorCode::ArcsNotDisjoint: return "ArcsNotDisjoint";
    case ErrorCode::CurveTouchesBoundary: return "CurveTouchesBoundary";
    case ErrorCode::PathTooCloseToBoundary: return "PathTooCloseToBoundary";
    case ErrorCode::PlateauLevel: return "PlateauLevel";
    case ErrorCode::GradientVanished: return "GradientVanished";
    case ErrorCode::PlateauDegeneracy: return "PlateauDegeneracy";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace erbm
