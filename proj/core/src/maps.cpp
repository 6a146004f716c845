#include "erbm/maps.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"
#include "erbm/quadrature.hpp"

namespace erbm {

AnalyticMapField::Key AnalyticMapField::key_of(Point p) {
  Key k;
  static_assert(sizeof(long long) == sizeof(double));
  double x = p.real(), y = p.imag();
  std::memcpy(&k.x, &x, sizeof(double));
  std::memcpy(&k.y, &y, sizeof(double));
  return k;
}

AnalyticMapField AnalyticMapField::chordal(FieldPtr imag_part,
                                           std::shared_ptr<const PathRouter> router, Point anchor,
                                           double pinned_real, std::optional<Refusal> refusal) {
  AnalyticMapField m;
  m.field_ = std::move(imag_part);
  m.router_ = std::move(router);
  m.anchor_ = anchor;
  m.pin_ = pinned_real;
  m.role_ = HarmonicRole::Imaginary;
  m.exp_form_ = false;
  m.refusal_ = refusal;
  return m;
}

AnalyticMapField AnalyticMapField::exponential(FieldPtr u_part, double scale,
                                               std::shared_ptr<const PathRouter> router,
                                               Point anchor) {
  AnalyticMapField m;
  m.field_ = std::move(u_part);
  m.router_ = std::move(router);
  m.anchor_ = anchor;
  m.scale_ = scale;
  m.role_ = HarmonicRole::Real;
  m.exp_form_ = true;
  return m;
}

double AnalyticMapField::integrated_part(Point z) const {
  if (refusal_ && std::abs(z - refusal_->at) < refusal_->radius) {
    throw Error(ErrorCode::InvalidArgument,
                "map evaluation refused within 1e-2 of the pole boundary point");
  }
  auto path = router_->route(anchor_, z);

  // Reuse the longest cached prefix ending at a router waypoint.
  size_t start_idx = 0;
  Point prefix(0, 0);
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    for (size_t i = path.size() >= 2 ? path.size() - 2 : 0; i > 0; --i) {
      auto it = cache_->map.find(key_of(path[i]));
      if (it != cache_->map.end()) {
        start_idx = i;
        prefix = it->second;
        break;
      }
    }
  }

  auto scaled_deriv = [&](Point p) { return scale_ * analytic_derivative_at(*field_, role_, p); };
  Point acc = prefix;
  for (size_t s = start_idx; s + 1 < path.size(); ++s) {
    acc += integrate_segment(scaled_deriv, path[s], path[s + 1], 1e-11);
    if (s + 2 < path.size()) {  // interior vertex = waypoint; cache its prefix
      std::lock_guard<std::mutex> lock(cache_->mutex);
      cache_->map.emplace(key_of(path[s + 1]), acc);
    }
  }
  return role_ == HarmonicRole::Imaginary ? pin_ + acc.real() : acc.imag();
}

Point AnalyticMapField::evaluate(Point z) const {
  if (!exp_form_) {
    double u = integrated_part(z);
    double v = field_->value(z);
    return {u, v};
  }
  double u = scale_ * field_->value(z);
  double v = integrated_part(z);
  return std::exp(Point(-u, -v));
}

namespace {

// Golden-section refinement of an extremum of fn inside [a, b].
template <typename F>
double golden_refine(const F& fn, double a, double b, bool maximize, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    bool pick_left = maximize ? (fc > fd) : (fc < fd);
    if (pick_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

// Extrema of a periodic sampled function refined by golden section.
template <typename F>
std::pair<double, double> periodic_extrema(const F& fn, int coarse, double tol) {
  std::vector<double> vals(static_cast<size_t>(coarse));
  for (int j = 0; j < coarse; ++j) vals[static_cast<size_t>(j)] = fn(kTwoPi * j / coarse);
  auto value_at = [&](int j) { return vals[static_cast<size_t>((j % coarse + coarse) % coarse)]; };
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int j = 0; j < coarse; ++j) {
    double h = kTwoPi / coarse;
    if (value_at(j) <= value_at(j - 1) && value_at(j) <= value_at(j + 1)) {
      double t = golden_refine(fn, (j - 1) * h, (j + 1) * h, false, tol);
      lo = std::min(lo, fn(t));
    }
    if (value_at(j) >= value_at(j - 1) && value_at(j) >= value_at(j + 1)) {
      double t = golden_refine(fn, (j - 1) * h, (j + 1) * h, true, tol);
      hi = std::max(hi, fn(t));
    }
  }
  // Plateau-flat functions may have no strict local extrema on the grid.
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    for (int j = 0; j < coarse; ++j) {
      lo = std::min(lo, value_at(j));
      hi = std::max(hi, value_at(j));
    }
  }
  return {lo, hi};
}

// Richardson pair of offset marches along one hole: evaluates the analytic
// completion on the hole boundary to O(offset^3). The absolute anchor values
// come from the map itself at the march start points.
struct HoleCompletion {
  OffsetMarch m1, m2;
  double base1 = 0, base2 = 0;  // completion value at the march starts
  bool use_real = false;        // chordal maps track Re f, exp maps track v

  double at(double t) const {
    double v1 = base1 + (use_real ? m1.eval(t).real() : m1.eval(t).imag());
    double v2 = base2 + (use_real ? m2.eval(t).real() : m2.eval(t).imag());
    return (4.0 * v1 - v2) / 3.0;
  }
};

HoleCompletion march_hole(const AnalyticMapField& map, const HarmonicField& field,
                          HarmonicRole role, double scale, const NystromSolver& solver,
                          int hole_index) {
  const auto& hole = solver.domain().component(hole_index);
  double delta = 6e-3 * solver.feature_scale(hole_index);
  FieldSum scaled;
  scaled.add(scale, FieldPtr(&field, [](const HarmonicField*) {}));  // non-owning view
  HoleCompletion hc;
  hc.use_real = role == HarmonicRole::Imaginary;
  hc.m1 = march_offset(scaled, role, hole, delta);
  hc.m2 = march_offset(scaled, role, hole, 2 * delta);
  if (hc.use_real) {
    hc.base1 = map.evaluate(hc.m1.start).real();
    hc.base2 = map.evaluate(hc.m2.start).real();
  } else {
    hc.base1 = map.integrated_part(hc.m1.start);
    hc.base2 = map.integrated_part(hc.m2.start);
  }
  return hc;
}

}  // namespace

ChordalMapResult chordal_map(ErWorkspacePtr ws, double t_w) {
  ChordalMapResult result;
  result.t_w = t_w;
  auto solver = ws->solver();
  const auto& outer = solver->domain().outer();
  result.w = outer.point(t_w);

  result.v_field = std::make_shared<ErField>(er_poisson_kernel(ws, t_w));

  // Anchor: inward-normal offset 0.1 * diameter from the parameter-antipodal
  // boundary point; u is pinned to 0 there.
  double t_ref = t_w + kPi;
  result.anchor = outer.point(t_ref) +
                  0.1 * solver->domain().diameter() * outer.normal_enclosed(t_ref);
  auto router = std::make_shared<PathRouter>(solver->domain());
  double refusal_radius = kMapRefusalArclength;
  result.map = std::make_shared<AnalyticMapField>(AnalyticMapField::chordal(
      result.v_field, router, result.anchor, 0.0,
      AnalyticMapField::Refusal{result.w, refusal_radius}));

  const int n = ws->hole_count();
  result.slits.slits.resize(static_cast<size_t>(n));
  result.slit_flatness.resize(static_cast<size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    auto& slit = result.slits.slits[static_cast<size_t>(i - 1)];
    slit.hole_index = i;
    slit.height = result.v_field->component_value(i);

    auto hc = march_hole(*result.map, *result.v_field, HarmonicRole::Imaginary, 1.0, *solver, i);
    auto fn = [&](double t) { return hc.at(t); };
    auto [lo, hi] = periodic_extrema(fn, 1024, 1e-10);
    slit.x_min = lo;
    slit.x_max = hi;

    // Flatness: std of the Im f trace over the hole boundary.
    const auto& cn = solver->component(i);
    double mean = 0, m2 = 0;
    std::vector<double> trace(static_cast<size_t>(cn.node_count));
    for (int j = 0; j < cn.node_count; ++j) {
      trace[static_cast<size_t>(j)] =
          result.v_field->boundary_trace(i, cn.t[static_cast<size_t>(j)]);
      mean += trace[static_cast<size_t>(j)];
    }
    mean /= cn.node_count;
    for (double v : trace) m2 += (v - mean) * (v - mean);
    result.slit_flatness[static_cast<size_t>(i - 1)] = std::sqrt(m2 / cn.node_count);
  }

  // Plateau degeneracy: equal heights with overlapping x-ranges.
  for (int i = 0; i < n && !result.slits.plateau_degeneracy; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& a = result.slits.slits[static_cast<size_t>(i)];
      const auto& b = result.slits.slits[static_cast<size_t>(j)];
      if (std::abs(a.height - b.height) < 1e-9 &&
          std::max(a.x_min, b.x_min) < std::min(a.x_max, b.x_max)) {
        result.slits.plateau_degeneracy = true;
      }
    }
  }

  // Injectivity smoke test over 100 random interior pairs.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  const auto& domain = solver->domain();
  double diam = domain.diameter();
  auto sample_point = [&]() {
    for (int tries = 0; tries < 1000; ++tries) {
      Point z(ux(rng) * diam, ux(rng) * diam);
      if (!domain.contains(z)) continue;
      if (domain.closest_boundary(z).distance < 0.02 * diam) continue;
      if (std::abs(z - result.w) < 3 * refusal_radius) continue;
      return z;
    }
    throw Error(ErrorCode::InvalidArgument, "could not sample interior points");
  };
  double min_sep = std::numeric_limits<double>::infinity();
  for (int pair = 0; pair < 100; ++pair) {
    Point a = sample_point(), b = sample_point();
    if (std::abs(a - b) < 1e-3 * diam) continue;
    min_sep = std::min(min_sep, std::abs(result.map->evaluate(a) - result.map->evaluate(b)));
  }
  result.injectivity_min_separation = min_sep;
  return result;
}

namespace {

// Shared slit-extraction for the two exponential maps.
void extract_arcs(const AnalyticMapField& map, const ErField& g, const NystromSolver& solver,
                  int skip_hole, std::vector<CircularArc>& arcs,
                  std::vector<double>& radial_deviation) {
  const int n = solver.domain().hole_count();
  for (int j = 1; j <= n; ++j) {
    if (j == skip_hole) continue;
    CircularArc arc;
    arc.hole_index = j;
    arc.radius = std::exp(-kPi * g.component_value(j));

    auto hc = march_hole(map, g, HarmonicRole::Real, kPi, solver, j);
    auto theta = [&](double t) { return -hc.at(t); };
    auto [lo, hi] = periodic_extrema(theta, 1024, 1e-10);
    arc.theta_min = lo;
    arc.theta_max = hi;
    arcs.push_back(arc);

    // Radial deviation of |f| along the hole. Unlike the conjugate, u has a
    // nonzero normal derivative there (it carries the hole flux), so the
    // boundary limit needs the three-point extrapolation
    // u(0) = 3u(d) - 3u(2d) + u(3d) + O(d^3).
    double delta = 6e-3 * solver.feature_scale(j);
    const auto& hole = solver.domain().component(j);
    double dev = 0;
    for (int m = 0; m < 128; ++m) {
      double t = kTwoPi * m / 128;
      double u1 = kPi * g.value(offset_point(hole, t, delta));
      double u2 = kPi * g.value(offset_point(hole, t, 2 * delta));
      double u3 = kPi * g.value(offset_point(hole, t, 3 * delta));
      double u_hole = 3.0 * u1 - 3.0 * u2 + u3;
      dev = std::max(dev, std::abs(std::exp(-u_hole) - arc.radius));
    }
    radial_deviation.push_back(dev);
  }
}

double outer_modulus_deviation(const ErField& g, const NystromSolver& solver) {
  // Half-node offset keeps the samples away from the collocation nodes where
  // the trace reproduces the data exactly.
  double dev = 0;
  const int samples = solver.component(0).node_count;
  for (int m = 0; m < samples; ++m) {
    double t = kTwoPi * (m + 0.5) / samples;
    double u = kPi * g.boundary_trace(0, t);
    dev = std::max(dev, std::abs(std::exp(-u) - 1.0));
  }
  return dev;
}

}  // namespace

BilateralMapResult bilateral_map(ErWorkspacePtr ws, int hole_index) {
  if (hole_index < 1 || hole_index > ws->hole_count()) {
    throw Error(ErrorCode::InvalidArgument, "hole index out of range");
  }
  BilateralMapResult result;
  result.source_hole = hole_index;
  auto solver = ws->solver();
  result.g_field = std::make_shared<ErField>(er_green_component(ws, hole_index));

  auto router = std::make_shared<PathRouter>(solver->domain());
  Point anchor = ws->collar(hole_index).curve.point(0);
  result.map = std::make_shared<AnalyticMapField>(
      AnalyticMapField::exponential(result.g_field, kPi, router, anchor));

  result.ring.source_hole = hole_index;
  result.ring.inner_radius = std::exp(-kPi * result.g_field->component_value(hole_index));
  extract_arcs(*result.map, *result.g_field, *solver, hole_index, result.ring.arcs,
               result.arc_radial_deviation);
  result.boundary_modulus_deviation = outer_modulus_deviation(*result.g_field, *solver);

  // Conjugate periods: -2pi around the source, 0 around the others.
  FieldSum scaled;
  scaled.add(kPi, result.g_field);
  for (int j = 1; j <= ws->hole_count(); ++j) {
    double delta = 0.45 * solver->feature_scale(j);
    auto march = march_offset(scaled, HarmonicRole::Real, solver->domain().component(j), delta);
    double period = march.period().imag();
    if (j == hole_index) {
      result.conjugate_period_source = period;
    } else {
      result.conjugate_period_others.push_back(period);
    }
  }
  return result;
}

RadialMapResult radial_map(ErWorkspacePtr ws, Point z0) {
  RadialMapResult result;
  result.z0 = z0;
  auto solver = ws->solver();
  result.g_field = std::make_shared<ErField>(er_green(ws, z0));

  auto router = std::make_shared<PathRouter>(solver->domain(), std::vector<Point>{z0});
  double d_boundary = solver->domain().closest_boundary(z0).distance;
  Point anchor(0, 0);
  bool found = false;
  for (int k = 0; k < 8 && !found; ++k) {
    Point cand = z0 + 0.5 * d_boundary * std::polar(1.0, kTwoPi * k / 8);
    if (solver->domain().contains(cand)) {
      anchor = cand;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::InvalidArgument, "no anchor point near z0");
  result.map = std::make_shared<AnalyticMapField>(
      AnalyticMapField::exponential(result.g_field, kPi, router, anchor));

  extract_arcs(*result.map, *result.g_field, *solver, 0, result.disk.arcs,
               result.arc_radial_deviation);
  result.boundary_modulus_deviation = outer_modulus_deviation(*result.g_field, *solver);

  // |f| at z0 by Richardson extrapolation from offsets 1e-4 and 5e-5.
  double h = 1e-4 * solver->domain().diameter();
  double f1 = std::abs(result.map->evaluate(z0 + Point(h, 0)));
  double f2 = std::abs(result.map->evaluate(z0 + Point(0.5 * h, 0)));
  result.origin_modulus = std::abs(2.0 * f2 - f1);
  return result;
}

}  // namespace erbm
