#pragma once

#include <optional>
#include <vector>

#include "erbm/domain.hpp"
#include "erbm/field.hpp"

namespace erbm {

struct LevelCurve {
  double level = 0;
  std::vector<Point> points;  // closed: back() == front()
  double closure_gap = 0;     // residual distance when the loop was closed
  bool simple = true;         // no self-intersections at trace resolution
  bool through_terminal = false;
  int steps = 0;
};

struct TraceOptions {
  /// Boundary point the curve closes through (the chordal kernel's w); the
  /// level set is an open arc whose closure adds this point.
  std::optional<Point> terminal;
  /// When set, predictor/corrector points must stay inside this domain;
  /// steps that leave it are retried at half size.
  const Domain* domain = nullptr;
  /// Plateau values c_i; levels within 1e-6 of one raise PlateauLevel.
  std::vector<double> plateau_values;
  double diameter = 2.0;
  double max_step_factor = 1.0 / 200.0;
  int max_steps = 200000;
  double corrector_tol = 1e-10;
};

/// Predictor-corrector continuation of {field = level}: Euler predictor along
/// the rotated gradient, Newton corrector onto the level set, curvature-
/// adaptive steps. Throws PlateauLevel for plateau levels and GradientVanished
/// when |grad| < 1e-8 at a trace point.
LevelCurve trace_level_curve(const HarmonicField& field, double level, Point start,
                             const TraceOptions& opts);

/// Bisection along the segment [a, b] for a point with field = level;
/// requires a sign change of (field - level) along the segment.
Point find_level_on_segment(const HarmonicField& field, double level, Point a, Point b);

/// Marches from `from` along `direction`, skipping stretches outside the
/// domain, and bisects the first in-domain sign change of (field - level).
/// Returns nothing when the ray never crosses the level.
std::optional<Point> find_level_on_ray(const HarmonicField& field, double level, Point from,
                                       Point direction, double max_length, const Domain& domain,
                                       double step_hint = 0);

/// Winding number of a closed polyline around z.
int polyline_winding(const std::vector<Point>& polyline, Point z);

/// Squared-distance check of sampled points against a polyline (Hausdorff-
/// style helper for tests).
double polyline_distance(const std::vector<Point>& polyline, Point z);

}  // namespace erbm
