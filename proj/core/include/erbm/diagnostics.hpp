#pragma once

#include <optional>
#include <vector>

#include "erbm/domain.hpp"
#include "erbm/field.hpp"

namespace erbm {

struct GridSpec {
  int resolution = 256;          // cells per axis over the domain bounding box
  double boundary_margin = 1e-3;  // skip cells closer than this to the boundary
  std::optional<Point> exclude;  // e.g. pole or kernel point neighborhood
  double exclude_radius = 0;
  int workers = 0;               // 0 = hardware concurrency
};

struct FieldDiagnostics {
  double min_gradient = 0;
  Point argmin_gradient;
  int interior_cells = 0;
  /// Connected-component count of {field <= level} per requested level,
  /// counting cells that touch the outer boundary as connected through it.
  std::vector<std::pair<double, int>> sublevel_components;
  bool degenerate_gradient = false;  // min |grad| below 1e-8 (flagged, not thrown)
};

FieldDiagnostics field_diagnostics(const HarmonicField& field, const Domain& domain,
                                   const GridSpec& grid, const std::vector<double>& levels);

}  // namespace erbm
