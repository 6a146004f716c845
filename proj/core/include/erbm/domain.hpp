#pragma once

#include <string>
#include <vector>

#include "erbm/curve.hpp"

namespace erbm {

struct DomainViolation {
  enum class Kind {
    OuterInvalid,
    HoleInvalid,
    HoleOutsideOuter,
    HolesIntersect,
    ClearanceTooSmall,
  };
  Kind kind;
  int hole_a = -1;  // 1-based hole indices where applicable
  int hole_b = -1;
  std::string message;
};

struct ValidityReport {
  std::vector<DomainViolation> violations;
  bool valid() const { return violations.empty(); }
  std::string summary() const;
};

/// Bounded multiply connected domain: interior of `outer` minus the closed
/// regions enclosed by `holes`. All curves are stored counterclockwise with
/// disjoint closures.
class Domain {
 public:
  Domain(SmoothClosedCurve outer, std::vector<SmoothClosedCurve> holes);

  const SmoothClosedCurve& outer() const { return outer_; }
  const std::vector<SmoothClosedCurve>& holes() const { return holes_; }
  int hole_count() const { return static_cast<int>(holes_.size()); }

  /// Component access with the module-wide indexing: 0 = outer, 1..n = holes.
  const SmoothClosedCurve& component(int idx) const;
  int component_count() const { return hole_count() + 1; }

  double diameter() const { return diameter_; }
  bool contains(Point z) const;
  /// Distance from z to the nearest boundary component (index reported).
  struct BoundaryClosest {
    double distance;
    int component;
    double t;
  };
  BoundaryClosest closest_boundary(Point z) const;

  /// Minimal distance from hole i (1-based) to every other boundary piece.
  double clearance(int hole_index) const;

  Domain with_node_count(int n) const;

  ValidityReport validate() const;
  void require_valid() const;  // throws on first violation

 private:
  SmoothClosedCurve outer_;
  std::vector<SmoothClosedCurve> holes_;
  double diameter_;
};

/// Collar curve around one hole: outward offset re-smoothed to a band-limited
/// Fourier curve; winds once around its hole and zero around the others.
struct CollarCurve {
  int hole_index;  // 1-based
  double factor;
  SmoothClosedCurve curve;
};

CollarCurve collar_curve(const Domain& domain, int hole_index, double factor = 0.5);

ValidityReport validate_domain(const Domain& domain);

/// Min distance between two curves (sampled + Newton refinement).
double curve_distance(const SmoothClosedCurve& a, const SmoothClosedCurve& b);

}  // namespace erbm
