#include "erbm/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"

namespace erbm {

std::string ValidityReport::summary() const {
  if (violations.empty()) return "valid";
  std::ostringstream os;
  for (size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].message;
  }
  return os.str();
}

Domain::Domain(SmoothClosedCurve outer, std::vector<SmoothClosedCurve> holes)
    : outer_(std::move(outer)), holes_(std::move(holes)), diameter_(outer_.diameter()) {}

const SmoothClosedCurve& Domain::component(int idx) const {
  if (idx == 0) return outer_;
  return holes_.at(static_cast<size_t>(idx - 1));
}

bool Domain::contains(Point z) const {
  if (outer_.winding_number(z) != 1) return false;
  for (const auto& h : holes_) {
    if (h.winding_number(z) != 0) return false;
  }
  return true;
}

Domain::BoundaryClosest Domain::closest_boundary(Point z) const {
  BoundaryClosest best{std::numeric_limits<double>::infinity(), -1, 0};
  for (int c = 0; c < component_count(); ++c) {
    auto cp = component(c).closest_point(z);
    if (cp.distance < best.distance) best = {cp.distance, c, cp.t};
  }
  return best;
}

double curve_distance(const SmoothClosedCurve& a, const SmoothClosedCurve& b) {
  const int n = 512;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    Point p = a.point(kTwoPi * i / n);
    best = std::min(best, b.closest_point(p).distance);
  }
  // One refinement sweep from the other side.
  for (int i = 0; i < n; ++i) {
    Point p = b.point(kTwoPi * i / n);
    best = std::min(best, a.closest_point(p).distance);
  }
  return best;
}

double Domain::clearance(int hole_index) const {
  const auto& h = holes_.at(static_cast<size_t>(hole_index - 1));
  double best = curve_distance(h, outer_);
  for (int j = 1; j <= hole_count(); ++j) {
    if (j == hole_index) continue;
    best = std::min(best, curve_distance(h, holes_[static_cast<size_t>(j - 1)]));
  }
  return best;
}

Domain Domain::with_node_count(int n) const {
  std::vector<SmoothClosedCurve> hs;
  hs.reserve(holes_.size());
  for (const auto& h : holes_) hs.push_back(h.with_node_count(n));
  return Domain(outer_.with_node_count(n), std::move(hs));
}

ValidityReport Domain::validate() const { return validate_domain(*this); }

void Domain::require_valid() const {
  auto report = validate();
  if (!report.valid()) {
    const auto& v = report.violations.front();
    ErrorCode code = ErrorCode::InvalidArgument;
    switch (v.kind) {
      case DomainViolation::Kind::HoleOutsideOuter: code = ErrorCode::HoleOutsideOuter; break;
      case DomainViolation::Kind::HolesIntersect: code = ErrorCode::HolesIntersect; break;
      case DomainViolation::Kind::ClearanceTooSmall: code = ErrorCode::ClearanceTooSmall; break;
      default: break;
    }
    throw Error(code, report.summary());
  }
}

ValidityReport validate_domain(const Domain& domain) {
  ValidityReport report;
  const auto& outer = domain.outer();
  const double clearance_min = kClearanceFactor * outer.diameter();

  for (int i = 1; i <= domain.hole_count(); ++i) {
    const auto& hole = domain.component(i);
    // Strictly inside: center winding plus positive distance to the outer curve.
    bool center_inside = outer.winding_number(hole.center()) == 1;
    double d_outer = curve_distance(hole, outer);
    if (!center_inside) {
      report.violations.push_back({DomainViolation::Kind::HoleOutsideOuter, i, -1,
                                   "HoleOutsideOuter: hole " + std::to_string(i) +
                                       " is not inside the outer curve"});
    } else if (d_outer <= clearance_min) {
      report.violations.push_back({DomainViolation::Kind::ClearanceTooSmall, i, -1,
                                   "ClearanceTooSmall: hole " + std::to_string(i) +
                                       " touches the outer curve"});
    }
    // A hole containing the outer center while "inside" cannot happen for
    // simple curves, so the two checks above suffice for containment.
    for (int j = i + 1; j <= domain.hole_count(); ++j) {
      const auto& other = domain.component(j);
      double d = curve_distance(hole, other);
      bool nested = hole.winding_number(other.center()) != 0 ||
                    other.winding_number(hole.center()) != 0;
      if (nested || d <= 0) {
        report.violations.push_back({DomainViolation::Kind::HolesIntersect, i, j,
                                     "HolesIntersect: holes " + std::to_string(i) + " and " +
                                         std::to_string(j) + " overlap"});
      } else if (d <= clearance_min) {
        report.violations.push_back({DomainViolation::Kind::ClearanceTooSmall, i, j,
                                     "ClearanceTooSmall: holes " + std::to_string(i) + " and " +
                                         std::to_string(j) + " are closer than the minimum clearance"});
      }
    }
  }
  return report;
}

CollarCurve collar_curve(const Domain& domain, int hole_index, double factor) {
  domain.require_valid();
  if (hole_index < 1 || hole_index > domain.hole_count()) {
    throw Error(ErrorCode::InvalidArgument, "hole index out of range");
  }
  if (!(factor > 0 && factor < 1)) {
    throw Error(ErrorCode::InvalidArgument, "collar factor must lie in (0,1)");
  }
  const auto& hole = domain.component(hole_index);
  const double offset = factor * domain.clearance(hole_index);

  // Sample the outward offset curve and project onto K Fourier modes.
  const int samples = 512;
  const int K = kCollarFourierModes;
  std::vector<Point> vals(samples);
  Point mean(0, 0);
  for (int m = 0; m < samples; ++m) {
    double t = kTwoPi * m / samples;
    vals[static_cast<size_t>(m)] = hole.point(t) + offset * hole.normal_away(t);
    mean += vals[static_cast<size_t>(m)];
  }
  mean /= static_cast<double>(samples);

  std::vector<Point> coeffs(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    Point c(0, 0);
    for (int m = 0; m < samples; ++m) {
      double t = kTwoPi * m / samples;
      c += (vals[static_cast<size_t>(m)] - mean) * std::polar(1.0, -k * t);
    }
    coeffs[static_cast<size_t>(k + K)] = c / static_cast<double>(samples);
  }

  SmoothClosedCurve curve = [&] {
    try {
      return SmoothClosedCurve::fourier(mean, coeffs, hole.node_count());
    } catch (const Error& e) {
      throw Error(ErrorCode::ClearanceTooSmall,
                  std::string("collar offset produced an invalid curve (") + e.what() + ")");
    }
  }();

  // Winding invariants: once around its own hole, zero around the others,
  // and strictly inside the domain.
  for (int j = 1; j <= domain.hole_count(); ++j) {
    int w = curve.winding_number(domain.component(j).center());
    int expected = (j == hole_index) ? 1 : 0;
    if (w != expected) {
      throw Error(ErrorCode::ClearanceTooSmall, "collar winding invariant violated");
    }
  }
  const int probe = 128;
  for (int m = 0; m < probe; ++m) {
    Point p = curve.point(kTwoPi * m / probe);
    if (!domain.contains(p)) {
      throw Error(ErrorCode::ClearanceTooSmall, "collar leaves the domain");
    }
  }
  // Both gaps must keep a 5% share of the hole clearance, so factors close
  // to 1 (or re-smoothing overshoot) are rejected.
  const double clearance = offset / factor;
  double gap_hole = curve_distance(curve, hole);
  double gap_rest = curve_distance(curve, domain.outer());
  for (int j = 1; j <= domain.hole_count(); ++j) {
    if (j == hole_index) continue;
    gap_rest = std::min(gap_rest, curve_distance(curve, domain.component(j)));
  }
  if (gap_hole < 0.05 * clearance || gap_rest < 0.05 * clearance) {
    throw Error(ErrorCode::ClearanceTooSmall, "collar too close to a boundary component");
  }
  return CollarCurve{hole_index, factor, curve};
}

}  // namespace erbm
