#include "erbm/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"

namespace erbm {

namespace {

bool finite(Point p) { return std::isfinite(p.real()) && std::isfinite(p.imag()); }

// Orientation of the triple (a,b,c); robust enough for the sampled
// self-intersection heuristic.
int orient(Point a, Point b, Point c) {
  double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 != o2 && o3 != o4;
}

}  // namespace

SmoothClosedCurve SmoothClosedCurve::circle(Point center, double radius, int node_count) {
  if (!finite(center) || !std::isfinite(radius)) {
    throw Error(ErrorCode::DegenerateCurve, "circle parameters not finite");
  }
  if (radius <= 0) throw Error(ErrorCode::DegenerateCurve, "circle radius must be positive");
  SmoothClosedCurve c;
  c.center_ = center;
  c.coeff_ = {Point(0, 0), Point(0, 0), Point(radius, 0)};  // c_{-1}, c_0, c_1
  c.kind_ = CurveKind::Circle;
  c.node_count_ = node_count;
  c.descriptor_ = {CurveKind::Circle, center, radius, 0, 0, 0, {}};
  c.build_samples_and_validate();
  return c;
}

SmoothClosedCurve SmoothClosedCurve::ellipse(Point center, double semi_a, double semi_b,
                                             double rotation, int node_count) {
  if (!finite(center) || !std::isfinite(semi_a) || !std::isfinite(semi_b) ||
      !std::isfinite(rotation)) {
    throw Error(ErrorCode::DegenerateCurve, "ellipse parameters not finite");
  }
  if (semi_a <= 0 || semi_b <= 0) {
    throw Error(ErrorCode::DegenerateCurve, "ellipse semi-axes must be positive");
  }
  // e^{i rot} (a cos t + i b sin t) = e^{i rot} [ (a+b)/2 e^{it} + (a-b)/2 e^{-it} ]
  Point rot = std::polar(1.0, rotation);
  SmoothClosedCurve c;
  c.center_ = center;
  c.coeff_ = {rot * Point((semi_a - semi_b) / 2, 0), Point(0, 0),
              rot * Point((semi_a + semi_b) / 2, 0)};
  c.kind_ = CurveKind::Ellipse;
  c.node_count_ = node_count;
  c.descriptor_ = {CurveKind::Ellipse, center, 0, semi_a, semi_b, rotation, {}};
  c.build_samples_and_validate();
  return c;
}

SmoothClosedCurve SmoothClosedCurve::fourier(Point center, const std::vector<Point>& coeffs,
                                             int node_count) {
  if (coeffs.empty() || coeffs.size() % 2 == 0) {
    throw Error(ErrorCode::DegenerateCurve, "fourier coefficients must be c_{-K}..c_K");
  }
  if (!finite(center)) throw Error(ErrorCode::DegenerateCurve, "fourier center not finite");
  for (Point p : coeffs) {
    if (!finite(p)) throw Error(ErrorCode::DegenerateCurve, "fourier coefficient not finite");
  }
  SmoothClosedCurve c;
  c.center_ = center;
  c.coeff_ = coeffs;
  c.kind_ = CurveKind::Fourier;
  c.node_count_ = node_count;
  c.descriptor_ = {CurveKind::Fourier, center, 0, 0, 0, 0, coeffs};
  // Normalize orientation to counterclockwise: gamma(-t) swaps c_k and c_{-k}.
  if (c.signed_area() < 0) {
    std::reverse(c.coeff_.begin(), c.coeff_.end());
    c.descriptor_.coeffs = c.coeff_;
  }
  c.build_samples_and_validate();
  return c;
}

Point SmoothClosedCurve::point(double t) const {
  const int K = max_mode();
  Point e = std::polar(1.0, t);
  Point sum(0, 0);
  Point ekt = std::polar(1.0, -K * t);
  for (int k = -K; k <= K; ++k) {
    sum += coeff_[static_cast<size_t>(k + K)] * ekt;
    ekt *= e;
  }
  return center_ + sum;
}

Point SmoothClosedCurve::derivative(double t) const {
  const int K = max_mode();
  Point e = std::polar(1.0, t);
  Point sum(0, 0);
  Point ekt = std::polar(1.0, -K * t);
  for (int k = -K; k <= K; ++k) {
    sum += Point(0, k) * coeff_[static_cast<size_t>(k + K)] * ekt;
    ekt *= e;
  }
  return sum;
}

Point SmoothClosedCurve::second_derivative(double t) const {
  const int K = max_mode();
  Point e = std::polar(1.0, t);
  Point sum(0, 0);
  Point ekt = std::polar(1.0, -K * t);
  for (int k = -K; k <= K; ++k) {
    sum += Point(-double(k) * k, 0) * coeff_[static_cast<size_t>(k + K)] * ekt;
    ekt *= e;
  }
  return sum;
}

double SmoothClosedCurve::speed(double t) const { return std::abs(derivative(t)); }

Point SmoothClosedCurve::unit_tangent(double t) const {
  Point d = derivative(t);
  return d / std::abs(d);
}

Point SmoothClosedCurve::normal_enclosed(double t) const {
  // For a ccw curve the enclosed region lies to the left of the tangent.
  return Point(0, 1) * unit_tangent(t);
}

double SmoothClosedCurve::signed_area() const {
  // A = pi * sum_k k |c_k|^2 for trig-polynomial curves.
  const int K = max_mode();
  double a = 0;
  for (int k = -K; k <= K; ++k) a += k * norm2(coeff_[static_cast<size_t>(k + K)]);
  return kPi * a;
}

double SmoothClosedCurve::length() const {
  const int n = 1024;
  double s = 0;
  for (int i = 0; i < n; ++i) s += speed(kTwoPi * i / n);
  return s * kTwoPi / n;
}

double SmoothClosedCurve::diameter() const {
  const int n = 256;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = xmax;
  for (int i = 0; i < n; ++i) {
    Point p = point(kTwoPi * i / n);
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

int SmoothClosedCurve::winding_number(Point z) const {
  // Signed crossing count of the horizontal ray from z over the cached
  // sample polygon (trig-free).
  const auto& pts = *samples_;
  int winding = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    Point a = pts[i], b = pts[i + 1];
    bool a_below = a.imag() <= z.imag();
    bool b_below = b.imag() <= z.imag();
    if (a_below == b_below) continue;
    double x_cross =
        a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
    if (x_cross > z.real()) winding += b.imag() > a.imag() ? 1 : -1;
  }
  return winding;
}

SmoothClosedCurve::Closest SmoothClosedCurve::closest_point(Point z) const {
  if (kind_ == CurveKind::Circle) {
    double r = descriptor_.radius;
    Point d = z - center_;
    double dist = std::abs(std::abs(d) - r);
    double t = std::abs(d) < 1e-300 ? 0.0 : std::arg(d);
    if (t < 0) t += kTwoPi;
    return {dist, t};
  }
  const auto& pts = *samples_;
  const int n_samples = static_cast<int>(pts.size()) - 1;
  const int stride = std::max(1, n_samples / 256);
  double best_t = 0, best_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; i += stride) {
    double d2 = norm2(pts[static_cast<size_t>(i)] - z);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_t = kTwoPi * i / n_samples;
    }
  }
  const int coarse = n_samples / stride;
  // Newton on g(t) = |gamma(t) - z|^2.
  double t = best_t;
  for (int it = 0; it < 12; ++it) {
    Point g = point(t) - z, dg = derivative(t), d2g = second_derivative(t);
    double g1 = 2 * dot(g, dg);
    double g2 = 2 * (norm2(dg) + dot(g, d2g));
    if (std::abs(g2) < 1e-300) break;
    double step = g1 / g2;
    step = std::clamp(step, -kTwoPi / coarse, kTwoPi / coarse);
    t -= step;
    if (std::abs(step) < 1e-15) break;
  }
  double dist = std::abs(point(t) - z);
  if (dist * dist > best_d2) {
    t = best_t;
    dist = std::sqrt(best_d2);
  }
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return {dist, t};
}

SmoothClosedCurve SmoothClosedCurve::with_node_count(int n) const {
  if (n <= 8) throw Error(ErrorCode::InvalidArgument, "node count too small");
  SmoothClosedCurve c = *this;
  c.node_count_ = n;
  return c;
}

void SmoothClosedCurve::build_samples_and_validate() {
  if (node_count_ <= 8) throw Error(ErrorCode::InvalidArgument, "node count too small");
  const int n = kSelfIntersectSegments;
  auto pts = std::make_shared<std::vector<Point>>(static_cast<size_t>(n) + 1);
  double min_speed = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    double t = kTwoPi * i / n;
    (*pts)[static_cast<size_t>(i)] = point(t);
    if (i < n) min_speed = std::min(min_speed, speed(t));
  }
  samples_ = pts;

  double diam = diameter();
  if (!(diam > 0) || !std::isfinite(diam)) {
    throw Error(ErrorCode::DegenerateCurve, "curve has zero or non-finite extent");
  }
  if (signed_area() <= 0) {
    throw Error(ErrorCode::DegenerateCurve, "curve orientation is not counterclockwise");
  }
  if (min_speed <= kMinSpeedFactor * diam) {
    throw Error(ErrorCode::DegenerateCurve, "curve speed falls below threshold");
  }

  // Sampled segment-intersection simplicity check (a documented heuristic).
  // Grid-bucketed by segment length to keep the scan near-linear.
  const auto& p = *pts;
  double max_len = 0;
  double xmin = p[0].real(), xmax = xmin, ymin = p[0].imag(), ymax = ymin;
  for (int i = 0; i < n; ++i) {
    max_len = std::max(max_len, std::abs(p[static_cast<size_t>(i) + 1] - p[static_cast<size_t>(i)]));
    xmin = std::min(xmin, p[static_cast<size_t>(i)].real());
    xmax = std::max(xmax, p[static_cast<size_t>(i)].real());
    ymin = std::min(ymin, p[static_cast<size_t>(i)].imag());
    ymax = std::max(ymax, p[static_cast<size_t>(i)].imag());
  }
  double cell = std::max(max_len, 1e-12 * diam);
  int gx = std::max(1, static_cast<int>((xmax - xmin) / cell) + 1);
  auto cell_index = [&](Point q) {
    int cx = static_cast<int>((q.real() - xmin) / cell);
    int cy = static_cast<int>((q.imag() - ymin) / cell);
    return std::pair<int, int>(cx, cy);
  };
  std::unordered_map<long long, std::vector<int>> grid;
  auto key = [gx](int cx, int cy) { return static_cast<long long>(cy) * (gx + 2) + cx; };
  for (int i = 0; i < n; ++i) {
    auto [cx, cy] = cell_index(0.5 * (p[static_cast<size_t>(i)] + p[static_cast<size_t>(i) + 1]));
    grid[key(cx, cy)].push_back(i);
  }
  for (int i = 0; i < n; ++i) {
    auto [cx, cy] = cell_index(0.5 * (p[static_cast<size_t>(i)] + p[static_cast<size_t>(i) + 1]));
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (int j : it->second) {
          if (j <= i + 1) continue;
          if (i == 0 && j == n - 1) continue;  // adjacent through wrap
          if (segments_intersect(p[static_cast<size_t>(i)], p[static_cast<size_t>(i) + 1],
                                 p[static_cast<size_t>(j)], p[static_cast<size_t>(j) + 1])) {
            throw Error(ErrorCode::NonSimpleCurve, "sampled self-intersection found");
          }
        }
      }
    }
  }
}

}  // namespace erbm
