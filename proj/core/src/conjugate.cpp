#include "erbm/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"
#include "erbm/quadrature.hpp"

namespace erbm {

Point analytic_derivative_at(const HarmonicField& field, HarmonicRole role, Point z) {
  Point g = field.gradient(z);
  if (role == HarmonicRole::Imaginary) return {g.imag(), g.real()};
  return {g.real(), -g.imag()};
}

Point integrate_analytic(const HarmonicField& field, HarmonicRole role,
                         const std::vector<Point>& polyline, double tol) {
  Point total(0, 0);
  for (size_t s = 0; s + 1 < polyline.size(); ++s) {
    total += integrate_segment(
        [&](Point z) { return analytic_derivative_at(field, role, z); }, polyline[s],
        polyline[s + 1], tol);
  }
  return total;
}

double harmonic_conjugate(const HarmonicField& v, const Domain& domain, Point z0, Point z,
                          const std::vector<Point>& path) {
  std::vector<Point> full;
  full.push_back(z0);
  for (Point p : path) full.push_back(p);
  full.push_back(z);
  const double margin = kPathBoundaryMargin * domain.diameter();
  for (size_t s = 0; s + 1 < full.size(); ++s) {
    Point a = full[s], b = full[s + 1];
    int steps = std::max(2, static_cast<int>(std::abs(b - a) / (0.5 * margin)));
    for (int i = 0; i <= steps; ++i) {
      Point p = a + (b - a) * (static_cast<double>(i) / steps);
      if (domain.closest_boundary(p).distance < margin) {
        throw Error(ErrorCode::PathTooCloseToBoundary,
                    "integration path within 1e-3 * diameter of the boundary");
      }
    }
  }
  return integrate_analytic(v, HarmonicRole::Imaginary, full).real();
}

Point offset_point(const SmoothClosedCurve& base, double t, double offset) {
  return base.point(t) + offset * base.normal_away(t);
}

Point offset_derivative(const SmoothClosedCurve& base, double t, double offset) {
  // n_away = -i gamma'/|gamma'|; differentiate with
  // d|gamma'|/dt = Re(conj(gamma') gamma'') / |gamma'|.
  Point d1 = base.derivative(t);
  Point d2 = base.second_derivative(t);
  double speed = std::abs(d1);
  double dspeed = dot(d1, d2) / speed;
  Point dn = Point(0, -1) * (d2 / speed - d1 * (dspeed / (speed * speed)));
  return d1 + offset * dn;
}

OffsetMarch march_offset(const HarmonicField& field, HarmonicRole role,
                         const SmoothClosedCurve& base, double offset, int samples) {
  std::vector<double> re(static_cast<size_t>(samples)), im(static_cast<size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    double t = kTwoPi * j / samples;
    Point fprime = analytic_derivative_at(field, role, offset_point(base, t, offset));
    Point integrand = fprime * offset_derivative(base, t, offset);
    re[static_cast<size_t>(j)] = integrand.real();
    im[static_cast<size_t>(j)] = integrand.imag();
  }
  OffsetMarch m;
  m.re = TrigSeries::fit(re).antiderivative();
  m.im = TrigSeries::fit(im).antiderivative();
  m.start = offset_point(base, 0, offset);
  return m;
}

PathRouter::PathRouter(const Domain& domain, std::vector<Point> point_obstacles)
    : domain_(domain), obstacles_(std::move(point_obstacles)) {
  const double diam = domain_.diameter();
  double min_clear = diam;
  for (int i = 1; i <= domain_.hole_count(); ++i) {
    min_clear = std::min(min_clear, domain_.clearance(i));
  }
  margin_ = std::max(kPathBoundaryMargin * diam,
                     std::min(0.2 * min_clear, 0.015 * diam));
  obstacle_radius_ = std::max(1.2 * margin_, 0.01 * diam);

  // Waypoint rings: around each hole, around each obstacle, and a ring inside
  // the outer boundary for nonconvex outers.
  for (int i = 1; i <= domain_.hole_count(); ++i) {
    const auto& hole = domain_.component(i);
    double off = 0.5 * domain_.clearance(i);
    for (int k = 0; k < 16; ++k) {
      Point p = offset_point(hole, kTwoPi * k / 16, off);
      if (domain_.contains(p) && domain_.closest_boundary(p).distance > margin_) {
        waypoints_.push_back(p);
      }
    }
  }
  for (Point c : obstacles_) {
    for (int k = 0; k < 12; ++k) {
      Point p = c + 2.0 * obstacle_radius_ * std::polar(1.0, kTwoPi * k / 12);
      if (domain_.contains(p) && domain_.closest_boundary(p).distance > margin_) {
        waypoints_.push_back(p);
      }
    }
  }
  const auto& outer = domain_.outer();
  for (int k = 0; k < 24; ++k) {
    double t = kTwoPi * k / 24;
    Point p = outer.point(t) + (0.12 * diam) * outer.normal_enclosed(t);
    if (domain_.contains(p) && domain_.closest_boundary(p).distance > margin_) {
      bool clear_of_obstacles = true;
      for (Point c : obstacles_) {
        if (std::abs(p - c) < 1.5 * obstacle_radius_) clear_of_obstacles = false;
      }
      if (clear_of_obstacles) waypoints_.push_back(p);
    }
  }

}

double PathRouter::boundary_distance(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (int c = 0; c < domain_.component_count(); ++c) {
    best = std::min(best, domain_.component(c).closest_point(p).distance);
  }
  return best;
}

double PathRouter::waypoint_edge(size_t i, size_t j) const {
  auto key = std::minmax(i, j);
  {
    std::lock_guard<std::mutex> lock(edge_mutex_);
    auto it = edge_cache_.find(key);
    if (it != edge_cache_.end()) return it->second;
  }
  double d = segment_clear(waypoints_[i], waypoints_[j])
                 ? std::abs(waypoints_[i] - waypoints_[j])
                 : -1.0;
  std::lock_guard<std::mutex> lock(edge_mutex_);
  edge_cache_.emplace(key, d);
  return d;
}

bool PathRouter::segment_clear(Point a, Point b) const {
  // Distance-only test: with samples at spacing <= margin the 1-Lipschitz
  // boundary distance cannot dip to zero between samples, so a segment whose
  // samples all keep >= margin clearance never crosses the boundary. The
  // endpoints are interior by staging, hence the whole segment is interior.
  double len = std::abs(b - a);
  int steps = std::max(2, static_cast<int>(len / margin_) + 1);
  for (int i = 0; i <= steps; ++i) {
    Point p = a + (b - a) * (static_cast<double>(i) / steps);
    if (boundary_distance(p) < margin_) return false;
    for (Point c : obstacles_) {
      if (std::abs(p - c) < obstacle_radius_) return false;
    }
  }
  return true;
}

Point PathRouter::stage(Point p) const {
  auto cb = domain_.closest_boundary(p);
  double obstacle_d = std::numeric_limits<double>::infinity();
  Point nearest_obstacle(0, 0);
  for (Point c : obstacles_) {
    double d = std::abs(p - c);
    if (d < obstacle_d) {
      obstacle_d = d;
      nearest_obstacle = c;
    }
  }
  if (cb.distance >= margin_ && obstacle_d >= obstacle_radius_) return p;
  if (cb.distance < margin_ && cb.distance <= obstacle_d) {
    // Push along the boundary normal into the domain.
    const auto& curve = domain_.component(cb.component);
    Point into = (cb.component == 0) ? curve.normal_enclosed(cb.t) : curve.normal_away(cb.t);
    Point q = curve.point(cb.t) + (1.05 * margin_) * into;
    return q;
  }
  // Push radially away from the obstacle.
  Point dir = (p - nearest_obstacle) / std::max(obstacle_d, 1e-12);
  return nearest_obstacle + 1.05 * obstacle_radius_ * dir;
}

std::vector<Point> PathRouter::route(Point a, Point b) const {
  std::vector<Point> head{a}, tail;
  Point sa = stage(a), sb = stage(b);
  if (std::abs(sa - a) > 0) head.push_back(sa);
  if (std::abs(sb - b) > 0) tail.push_back(sb);
  tail.push_back(b);

  if (segment_clear(sa, sb)) {
    std::vector<Point> out = head;
    for (Point p : tail) out.push_back(p);
    return out;
  }

  // Dijkstra over {sa} + waypoints + {sb}.
  const size_t n = waypoints_.size();
  const size_t source = n, sink = n + 1;
  std::vector<double> dist(n + 2, std::numeric_limits<double>::infinity());
  std::vector<int> prev(n + 2, -1);
  auto edge = [&](size_t i, size_t j) -> double {
    if (i < n && j < n) return waypoint_edge(i, j);
    Point pi = i == source ? sa : (i == sink ? sb : waypoints_[i]);
    Point pj = j == source ? sa : (j == sink ? sb : waypoints_[j]);
    return segment_clear(pi, pj) ? std::abs(pi - pj) : -1.0;
  };
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0;
  pq.push({0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == sink) break;
    for (size_t v = 0; v < n + 2; ++v) {
      if (v == u || v == source) continue;
      double w = edge(u, v);
      if (w < 0) continue;
      if (d + w < dist[v]) {
        dist[v] = d + w;
        prev[v] = static_cast<int>(u);
        pq.push({dist[v], v});
      }
    }
  }
  if (!std::isfinite(dist[sink])) {
    throw Error(ErrorCode::PathTooCloseToBoundary, "no route between the requested points");
  }
  std::vector<Point> mid;
  for (int u = prev[sink]; u != -1 && static_cast<size_t>(u) != source; u = prev[u]) {
    mid.push_back(waypoints_[static_cast<size_t>(u)]);
  }
  std::reverse(mid.begin(), mid.end());
  std::vector<Point> out = head;
  for (Point p : mid) out.push_back(p);
  for (Point p : tail) out.push_back(p);
  return out;
}

}  // namespace erbm
