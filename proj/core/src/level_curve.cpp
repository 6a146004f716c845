#include "erbm/level_curve.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"

namespace erbm {

namespace {

// Newton correction onto the level set along the gradient direction.
// Accepts on the residual tolerance or on the position criterion
// |residual| / |grad| < pos_tol: where the gradient is large (the funnel at
// the kernel point w) evaluation noise exceeds any fixed residual tolerance,
// but the distance to the true curve stays below pos_tol.
bool newton_correct(const HarmonicField& field, double level, Point& z, double tol,
                    double pos_tol, double max_move) {
  for (int it = 0; it < 40; ++it) {
    double r = field.value(z) - level;
    Point g = field.gradient(z);
    double gn = std::abs(g);
    if (gn < kGradientAnomaly) {
      throw Error(ErrorCode::GradientVanished, "gradient below 1e-8 on the level curve");
    }
    if (std::abs(r) < tol || std::abs(r) < gn * pos_tol) return true;
    Point step = r * g / (gn * gn);
    if (std::abs(step) > max_move) return false;
    z -= step;
  }
  double r = field.value(z) - level;
  return std::abs(r) < 10 * tol || std::abs(r) < 10 * std::abs(field.gradient(z)) * pos_tol;
}

// Uniform-grid segment intersection test.
bool polyline_simple(const std::vector<Point>& pts) {
  if (pts.size() < 4) return true;
  const size_t nseg = pts.size() - 1;
  double max_len = 0;
  double xmin = pts[0].real(), xmax = xmin, ymin = pts[0].imag(), ymax = ymin;
  for (size_t i = 0; i < nseg; ++i) {
    max_len = std::max(max_len, std::abs(pts[i + 1] - pts[i]));
    xmin = std::min(xmin, pts[i].real());
    xmax = std::max(xmax, pts[i].real());
    ymin = std::min(ymin, pts[i].imag());
    ymax = std::max(ymax, pts[i].imag());
  }
  double cell = std::max(max_len, 1e-12);
  auto cell_of = [&](Point p) {
    return std::pair<long, long>(static_cast<long>((p.real() - xmin) / cell),
                                 static_cast<long>((p.imag() - ymin) / cell));
  };
  std::unordered_map<long long, std::vector<size_t>> grid;
  auto key = [](long cx, long cy) { return (static_cast<long long>(cx) << 32) ^ (cy & 0xffffffffLL); };
  for (size_t i = 0; i < nseg; ++i) {
    auto [cx, cy] = cell_of(0.5 * (pts[i] + pts[i + 1]));
    grid[key(cx, cy)].push_back(i);
  }
  auto orient = [](Point a, Point b, Point c) {
    double v = cross(b - a, c - a);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  };
  auto intersects = [&](size_t i, size_t j) {
    Point a = pts[i], b = pts[i + 1], c = pts[j], d = pts[j + 1];
    return orient(a, b, c) != orient(a, b, d) && orient(c, d, a) != orient(c, d, b);
  };
  for (size_t i = 0; i < nseg; ++i) {
    auto [cx, cy] = cell_of(0.5 * (pts[i] + pts[i + 1]));
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (size_t j : it->second) {
          if (j <= i + 1) continue;
          if (i == 0 && j == nseg - 1) continue;  // wrap adjacency
          if (intersects(i, j)) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

LevelCurve trace_level_curve(const HarmonicField& field, double level, Point start,
                             const TraceOptions& opts) {
  for (double c : opts.plateau_values) {
    if (std::abs(level - c) < kPlateauTolerance) {
      throw Error(ErrorCode::PlateauLevel,
                  "level within 1e-6 of a hole plateau value; not traced");
    }
  }
  const double diam = opts.diameter;
  const double h_max = opts.max_step_factor * diam;
  const double h_min = 1e-7 * diam;
  const double close_tol = 1e-6 * diam;

  const double pos_tol = 1e-9 * diam;
  const double sag_tol = 1e-7 * diam;
  Point z0 = start;
  if (!newton_correct(field, level, z0, opts.corrector_tol, pos_tol, 0.2 * diam)) {
    throw Error(ErrorCode::InvalidArgument, "start point did not converge onto the level set");
  }

  auto tangent_at = [&](Point z) {
    Point g = field.gradient(z);
    double gn = std::abs(g);
    if (gn < kGradientAnomaly) {
      throw Error(ErrorCode::GradientVanished, "gradient below 1e-8 on the level curve");
    }
    return Point(0, 1) * g / gn;
  };

  // Traces one direction until the stop target (terminal or loop start) is
  // reached; appends points after z0.
  auto trace_dir = [&](double sign, Point stop_at, bool stop_is_terminal,
                       std::vector<Point>& out) {
    Point z = z0;
    Point dir = sign * tangent_at(z0);
    double h = 0.25 * h_max;
    int steps = 0;
    bool approached = false;
    while (steps++ < opts.max_steps) {
      double dist_stop = std::abs(z - stop_at);
      bool near_stop = dist_stop < std::max(2.0 * h, 4 * close_tol) &&
                       (steps > 8 || stop_is_terminal);
      if (near_stop) {
        approached = true;
        h = std::min(h, std::max(0.35 * dist_stop, 0.5 * close_tol));
      }
      // Membership guard with a tolerance for the sampled-polygon sag, so
      // funnel points hugging the boundary are not falsely rejected.
      auto inside = [&](Point p) {
        if (!opts.domain) return true;
        if (opts.domain->contains(p)) return true;
        return opts.domain->closest_boundary(p).distance < 3e-6 * diam;
      };
      Point z_pred = z + h * dir;
      Point z_new = z_pred;
      bool ok = inside(z_pred);
      ok = ok && newton_correct(field, level, z_new, opts.corrector_tol, pos_tol, 2.5 * h);
      ok = ok && inside(z_new);
      if (!ok) {
        h *= 0.5;
        if (h < h_min) {
          throw Error(ErrorCode::InvalidArgument,
                      "corrector failed at minimum step size near (" +
                          std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                          "), residual " + std::to_string(field.value(z_pred) - level));
        }
        continue;
      }
      Point new_dir = tangent_at(z_new);
      if (dot(new_dir, dir) < 0) new_dir = -new_dir;

      // Curvature-adaptive step: keep the chord sag h^2 k / 8 below the
      // sag target and the turn per step moderate.
      double turn = std::abs(std::arg((new_dir / dir)));
      double kappa = std::max(turn / h, 0.1 / diam);
      double h_sag = std::sqrt(8.0 * sag_tol / kappa);
      double h_turn = 0.3 * h / std::max(turn, 1e-6);
      double h_next = std::min(h_sag, std::min(h_turn, 2.0 * h));
      h = std::clamp(h_next, h_min, h_max);

      z = z_new;
      dir = new_dir;
      out.push_back(z);
      if (approached && std::abs(z - stop_at) < close_tol) return std::abs(z - stop_at);
      if (stop_is_terminal && std::abs(z - stop_at) < 0.5 * close_tol) return std::abs(z - stop_at);
    }
    throw Error(ErrorCode::MaxStepsExceeded, "level-curve tracer exceeded the step budget");
  };

  LevelCurve curve;
  curve.level = level;
  if (opts.terminal) {
    // Open level arc terminating at w on both ends: trace both directions
    // from the start and stitch through the terminal.
    std::vector<Point> forward, backward;
    double gap1 = trace_dir(+1.0, *opts.terminal, true, forward);
    double gap2 = trace_dir(-1.0, *opts.terminal, true, backward);
    curve.points.push_back(*opts.terminal);
    for (auto it = backward.rbegin(); it != backward.rend(); ++it) curve.points.push_back(*it);
    curve.points.push_back(z0);
    for (Point p : forward) curve.points.push_back(p);
    curve.points.push_back(*opts.terminal);
    curve.closure_gap = std::max(gap1, gap2);
    curve.through_terminal = true;
  } else {
    std::vector<Point> forward;
    double gap = trace_dir(+1.0, z0, false, forward);
    curve.points.push_back(z0);
    for (Point p : forward) curve.points.push_back(p);
    curve.points.push_back(z0);
    curve.closure_gap = gap;
  }
  curve.steps = static_cast<int>(curve.points.size());
  curve.simple = polyline_simple(curve.points);
  return curve;
}

Point find_level_on_segment(const HarmonicField& field, double level, Point a, Point b) {
  double fa = field.value(a) - level;
  double fb = field.value(b) - level;
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0)) {
    throw Error(ErrorCode::InvalidArgument, "no sign change along the bracket segment");
  }
  for (int it = 0; it < 200; ++it) {
    Point mid = 0.5 * (a + b);
    double fm = field.value(mid) - level;
    if (fm == 0 || std::abs(b - a) < 1e-15) return mid;
    if ((fm > 0) == (fa > 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

std::optional<Point> find_level_on_ray(const HarmonicField& field, double level, Point from,
                                       Point direction, double max_length, const Domain& domain,
                                       double step_hint) {
  Point dir = direction / std::abs(direction);
  double step = step_hint > 0 ? step_hint : 2e-3 * domain.diameter();
  const double margin = 1e-4 * domain.diameter();
  bool have_prev = false;
  Point prev(0, 0);
  double prev_sign = 0;
  for (double s = 0; s <= max_length; s += step) {
    Point p = from + s * dir;
    bool usable = domain.contains(p) && domain.closest_boundary(p).distance > margin;
    if (!usable) {
      have_prev = false;  // restart the bracket after leaving the domain
      continue;
    }
    double sign = field.value(p) - level > 0 ? 1.0 : -1.0;
    if (have_prev && sign != prev_sign) {
      return find_level_on_segment(field, level, prev, p);
    }
    prev = p;
    prev_sign = sign;
    have_prev = true;
  }
  return std::nullopt;
}

int polyline_winding(const std::vector<Point>& polyline, Point z) {
  double total = 0;
  for (size_t i = 0; i + 1 < polyline.size(); ++i) {
    total += std::arg((polyline[i + 1] - z) / (polyline[i] - z));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

double polyline_distance(const std::vector<Point>& polyline, Point z) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < polyline.size(); ++i) {
    Point a = polyline[i], b = polyline[i + 1];
    Point ab = b - a;
    double t = std::clamp(dot(z - a, ab) / std::max(norm2(ab), 1e-300), 0.0, 1.0);
    best = std::min(best, std::abs(z - (a + t * ab)));
  }
  return best;
}

}  // namespace erbm
