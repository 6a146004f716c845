#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "erbm/point.hpp"

namespace erbm {

enum class CurveKind { Circle, Ellipse, Fourier };

/// Closed, simple, counterclockwise curve stored as a trigonometric polynomial
///   gamma(t) = center + sum_{k=-K..K} c_k e^{ikt},  t in [0, 2pi).
/// Circles and ellipses are one- and two-mode special cases, so derivatives of
/// any order are analytic for every supported kind.
class SmoothClosedCurve {
 public:
  static SmoothClosedCurve circle(Point center, double radius, int node_count = 256);
  static SmoothClosedCurve ellipse(Point center, double semi_a, double semi_b, double rotation,
                                   int node_count = 256);
  /// coeffs holds c_{-K} .. c_K (size 2K+1).
  static SmoothClosedCurve fourier(Point center, const std::vector<Point>& coeffs,
                                   int node_count = 256);

  Point point(double t) const;
  Point derivative(double t) const;
  Point second_derivative(double t) const;

  double speed(double t) const;
  Point unit_tangent(double t) const;
  /// Unit normal pointing into the region enclosed by the (ccw) curve.
  Point normal_enclosed(double t) const;
  /// Unit normal pointing away from the enclosed region.
  Point normal_away(double t) const { return -normal_enclosed(t); }

  double signed_area() const;
  double length() const;
  /// Bounding-box diagonal; used as the curve's scale.
  double diameter() const;
  Point center() const { return center_; }
  CurveKind kind() const { return kind_; }

  /// Winding number around z from a dense sampled argument sum.
  int winding_number(Point z) const;

  struct Closest {
    double distance;
    double t;
  };
  /// Distance to the curve (Newton-refined parameter search from a coarse scan).
  Closest closest_point(Point z) const;

  int node_count() const { return node_count_; }
  SmoothClosedCurve with_node_count(int n) const;

  int max_mode() const { return static_cast<int>(coeff_.size() / 2); }
  const std::vector<Point>& coefficients() const { return coeff_; }

  /// Original descriptor parameters, kept for file round-trips.
  struct Descriptor {
    CurveKind kind;
    Point center;
    double radius = 0.0;
    double semi_a = 0.0, semi_b = 0.0, rotation = 0.0;
    std::vector<Point> coeffs;
  };
  const Descriptor& descriptor() const { return descriptor_; }

  /// Dense sample polygon used by the winding, distance and intersection
  /// predicates (shared across copies; built once at construction).
  const std::vector<Point>& sample_polygon() const { return *samples_; }

 private:
  SmoothClosedCurve() = default;
  void build_samples_and_validate();  // throws NonSimpleCurve / DegenerateCurve

  Point center_;
  std::vector<Point> coeff_;  // c_{-K}..c_K at index K+k
  CurveKind kind_ = CurveKind::Fourier;
  int node_count_ = 256;
  Descriptor descriptor_;
  std::shared_ptr<const std::vector<Point>> samples_;
};

}  // namespace erbm
