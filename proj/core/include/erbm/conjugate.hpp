#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "erbm/domain.hpp"
#include "erbm/field.hpp"
#include "erbm/trig.hpp"

namespace erbm {

/// Which part of the analytic completion the known harmonic field plays.
enum class HarmonicRole {
  Imaginary,  // field = Im f, so f' = f_y + i f_x
  Real,       // field = Re f, so f' = f_x - i f_y
};

/// Complex derivative of the analytic completion, evaluated from the field's
/// gradient via the Cauchy-Riemann equations.
Point analytic_derivative_at(const HarmonicField& field, HarmonicRole role, Point z);

/// Integral of f' along a polyline (adaptive Gauss-Legendre per segment).
/// Re gives the change of Re f, Im the change of Im f.
Point integrate_analytic(const HarmonicField& field, HarmonicRole role,
                         const std::vector<Point>& polyline, double tol = 1e-11);

/// Change of the harmonic conjugate's partner: for a field v with a gradient,
/// returns u(z) - u(z0) where f = u + iv is analytic, integrating along the
/// given path. Throws PathTooCloseToBoundary when the path comes closer than
/// 1e-3 * diameter to the boundary of `domain`.
double harmonic_conjugate(const HarmonicField& v, const Domain& domain, Point z0, Point z,
                          const std::vector<Point>& path);

/// Spectral antiderivative of f' gamma' along the closed offset curve
/// gamma(t) + offset * n_away(t): evaluates the analytic completion along a
/// loop around one hole. The loop change over a full period is
/// 2*pi*(linear coefficient) of each part.
struct OffsetMarch {
  TrigSeries::Antiderivative re;
  TrigSeries::Antiderivative im;
  Point start;               // gamma_offset(0)
  Point period() const { return {kTwoPi * re.linear, kTwoPi * im.linear}; }
  Point eval(double t) const { return {re.eval(t), im.eval(t)}; }
};

OffsetMarch march_offset(const HarmonicField& field, HarmonicRole role,
                         const SmoothClosedCurve& base, double offset, int samples = 1024);

/// Point on the outward offset of a closed curve and its t-derivative.
Point offset_point(const SmoothClosedCurve& base, double t, double offset);
Point offset_derivative(const SmoothClosedCurve& base, double t, double offset);

/// Waypoint router: straight segments when visible, otherwise Dijkstra over
/// rings of waypoints around the holes (and around declared point obstacles,
/// e.g. Green poles). All route segments keep a clearance margin from the
/// boundary and the obstacles; targets inside the margin are approached by a
/// final straight staging leg.
class PathRouter {
 public:
  explicit PathRouter(const Domain& domain, std::vector<Point> point_obstacles = {});

  std::vector<Point> route(Point a, Point b) const;
  double margin() const { return margin_; }

 private:
  bool segment_clear(Point a, Point b) const;
  double waypoint_edge(size_t i, size_t j) const;  // memoized; -1 when blocked
  Point stage(Point p) const;
  double boundary_distance(Point p) const;

  const Domain domain_;
  std::vector<Point> obstacles_;
  double obstacle_radius_ = 0;
  double margin_ = 0;
  std::vector<Point> waypoints_;
  mutable std::mutex edge_mutex_;
  mutable std::map<std::pair<size_t, size_t>, double> edge_cache_;
};

}  // namespace erbm
