#pragma once

namespace erbm {

// Geometry
inline constexpr int kSelfIntersectSegments = 2048;  // sampled simplicity check
inline constexpr double kMinSpeedFactor = 1e-9;      // min |gamma'| / diameter
inline constexpr double kClearanceFactor = 1e-6;     // min hole clearance / outer diameter
inline constexpr int kCollarFourierModes = 64;       // collar re-smoothing band limit
inline constexpr int kDefaultNodes = 256;

// Potential-theory solver
inline constexpr double kIllConditioned = 1e10;
inline constexpr double kPoleBoundaryMinFactor = 1e-4;   // min pole distance / diameter
inline constexpr double kNearDiagonalArclength = 1e-3;   // boundary-kernel refusal
inline constexpr double kBoundaryCheckOffset = 1e-3;     // boundary-limit probes
inline constexpr double kDefaultCollarFactor = 0.5;

// Maps and level curves
inline constexpr double kPlateauTolerance = 1e-6;
inline constexpr double kLevelNewtonTolerance = 1e-10;
inline constexpr double kGradientAnomaly = 1e-8;
inline constexpr double kMapRefusalArclength = 1e-2;  // chordal map near w
inline constexpr double kPathBoundaryMargin = 1e-3;   // path clearance / diameter

// Sampler
inline constexpr double kDefaultCaptureEps = 1e-6;  // fraction of diameter
inline constexpr long kDefaultMaxEvents = 100000;
inline constexpr long kWosMaxSteps = 1000000;
inline constexpr int kRestartCdfTableSize = 1024;

}  // namespace erbm
