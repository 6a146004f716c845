#pragma once

#include <functional>
#include <vector>

#include "erbm/point.hpp"

namespace erbm {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights (cached per order).
const GaussRule& gauss_legendre(int order);

/// Integrates f over the straight segment [a, b] with adaptive panel
/// bisection until two refinement levels agree to tol.
Point integrate_segment(const std::function<Point(Point)>& f, Point a, Point b, double tol,
                        int max_depth = 24);

}  // namespace erbm
