#include <cmath>

#include "doctest.h"
#include "erbm/errors.hpp"
#include "erbm/maps.hpp"
#include "oracles.hpp"

using namespace erbm;

namespace {

ErWorkspacePtr disk_ws() {
  static ErWorkspacePtr ws =
      make_er_workspace(make_solver(Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {})));
  return ws;
}

ErWorkspacePtr annulus_ws() {
  static ErWorkspacePtr ws = make_er_workspace(make_solver(
      Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {SmoothClosedCurve::circle({0, 0}, 0.25)})));
  return ws;
}

ErWorkspacePtr onehole_ws() {
  static ErWorkspacePtr ws = make_er_workspace(make_solver(
      Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {SmoothClosedCurve::circle({0.35, 0}, 0.2)})));
  return ws;
}

}  // namespace

TEST_CASE("harmonic conjugate: identity map on the disk") {
  Domain disk(SmoothClosedCurve::circle({0, 0}, 1.0), {});
  // v = Im z is the imaginary part of f = z; u-difference from 0 to 0.9 is 0.9.
  FunctionField v([](Point z) { return z.imag(); }, [](Point) { return Point(0, 1); });
  double du = harmonic_conjugate(v, disk, {0, 0}, {0.9, 0}, {});
  CHECK(du == doctest::Approx(0.9).epsilon(1e-10));
  // Through an intermediate waypoint (path independence for entire functions).
  double du2 = harmonic_conjugate(v, disk, {0, 0}, {0.9, 0}, {Point(0.3, 0.4)});
  CHECK(du2 == doctest::Approx(0.9).epsilon(1e-9));
  CHECK_THROWS_AS(harmonic_conjugate(v, disk, {0, 0}, {0.9999, 0}, {}), Error);
}

TEST_CASE("conjugate of -log|z| accumulates -2pi around the origin") {
  FunctionField u([](Point z) { return -std::log(std::abs(z)); },
                  [](Point z) { return -z / norm2(z); });
  std::vector<Point> loop = {{0.5, 0}, {0, 0.5}, {-0.5, 0}, {0, -0.5}, {0.5, 0}};
  Point total = integrate_analytic(u, HarmonicRole::Real, loop);
  CHECK(total.imag() == doctest::Approx(-kTwoPi).epsilon(1e-8));
  CHECK(std::abs(total.real()) < 1e-10);
}

TEST_CASE("homotopic paths agree for ER fields (zero flux)") {
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0),
           {SmoothClosedCurve::circle({-0.45, 0}, 0.18),
            SmoothClosedCurve::circle({0.45, 0}, 0.18)});
  auto ws = make_er_workspace(make_solver(d));
  auto v = er_poisson_kernel(ws, 1.3);
  Point a(-0.8, 0.0), b(0.8, 0.0);
  // Route above and below the holes: same u-difference because every hole
  // flux of an ER-harmonic field vanishes.
  double above = harmonic_conjugate(v, d, a, b, {Point(-0.45, 0.7), Point(0.45, 0.7)});
  double below = harmonic_conjugate(v, d, a, b, {Point(-0.45, -0.7), Point(0.45, -0.7)});
  CHECK(std::abs(above - below) < 1e-6);
}

TEST_CASE("path router avoids holes and stays inside") {
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0), {SmoothClosedCurve::circle({0, 0}, 0.25)});
  PathRouter router(d);
  auto path = router.route({-0.6, 0.0}, {0.6, 0.0});
  REQUIRE(path.size() >= 3);  // must detour around the center hole
  for (size_t s = 0; s + 1 < path.size(); ++s) {
    for (int i = 0; i <= 16; ++i) {
      Point p = path[s] + (path[s + 1] - path[s]) * (i / 16.0);
      CHECK(d.contains(p));
    }
  }
}

TEST_CASE("offset march reproduces loop periods") {
  // u = -log|z| around the unit-circle hole at offset: conjugate period -2pi.
  FunctionField u([](Point z) { return -std::log(std::abs(z)); },
                  [](Point z) { return -z / norm2(z); });
  auto hole = SmoothClosedCurve::circle({0, 0}, 0.25);
  auto march = march_offset(u, HarmonicRole::Real, hole, 0.1);
  CHECK(march.period().imag() == doctest::Approx(-kTwoPi).epsilon(1e-10));
  CHECK(std::abs(march.period().real()) < 1e-10);
  // Entire field: both periods vanish.
  FunctionField re_z([](Point z) { return z.real(); }, [](Point) { return Point(1, 0); });
  auto march2 = march_offset(re_z, HarmonicRole::Real, hole, 0.1);
  CHECK(std::abs(march2.period().real()) < 1e-12);
  CHECK(std::abs(march2.period().imag()) < 1e-12);
}

TEST_CASE("chordal map on the disk matches the closed form up to a real shift") {
  auto result = chordal_map(disk_ws(), 0.0);
  // Im f(0) = H(0, w) = 1/(2pi).
  Point f0 = result.map->evaluate({0, 0});
  CHECK(f0.imag() == doctest::Approx(1.0 / kTwoPi).epsilon(1e-8));

  // u(i/2) - u(0) from the closed form: -0.8/(2pi).
  double du = result.map->evaluate({0, 0.5}).real() - f0.real();
  CHECK(du == doctest::Approx(-0.8 / kTwoPi).epsilon(1e-7));

  // Sup error over 50 points after fitting the real shift.
  std::vector<Point> probes;
  for (int i = 0; i < 50; ++i) {
    Point z = std::polar(0.15 + 0.6 * (i / 49.0), 0.13 + kTwoPi * i / 50.0);
    if (std::abs(z - Point(1, 0)) < 0.15) continue;
    probes.push_back(z);
  }
  double shift = 0;
  std::vector<Point> ours, ref;
  for (Point z : probes) {
    ours.push_back(result.map->evaluate(z));
    ref.push_back(oracles::disk_chordal_map(z));
    shift += (ref.back() - ours.back()).real();
  }
  shift /= static_cast<double>(probes.size());
  double sup = 0;
  for (size_t i = 0; i < probes.size(); ++i) {
    sup = std::max(sup, std::abs(ours[i] + Point(shift, 0) - ref[i]));
  }
  CHECK(sup < 1e-5);

  CHECK(result.injectivity_min_separation > 0);
  CHECK_THROWS_AS(result.map->evaluate(Point(0.995, 0.0)), Error);  // refusal near w
}

TEST_CASE("chordal map slit data on one-hole domain") {
  auto result = chordal_map(onehole_ws(), kPi);  // w = (-1, 0), hole on the real axis
  REQUIRE(result.slits.slits.size() == 1);
  const auto& slit = result.slits.slits[0];
  CHECK(slit.height > 0);
  CHECK(slit.x_min < slit.x_max);
  CHECK(result.slit_flatness[0] < 1e-6);
  CHECK(!result.slits.plateau_degeneracy);

  // The configuration is symmetric under conjugation (w and the hole sit on
  // the real axis), so the slit midpoint matches u at the on-axis points of
  // the hole boundary: u(gamma(0)) + u(gamma(pi)) = x_min + x_max.
  double mid = 0.5 * (slit.x_min + slit.x_max);
  const auto& hole = onehole_ws()->domain().component(1);
  double delta = 2e-3;
  auto u_at = [&](double t) {
    double u1 = result.map->evaluate(offset_point(hole, t, delta)).real();
    double u2 = result.map->evaluate(offset_point(hole, t, 2 * delta)).real();
    return (4 * u1 - u2) / 3.0;
  };
  CHECK(0.5 * (u_at(0.0) + u_at(kPi)) == doctest::Approx(mid).epsilon(1e-5));
}

TEST_CASE("chordal slit ratios are invariant under rotation + scaling") {
  Domain base(SmoothClosedCurve::circle({0, 0}, 1.0),
              {SmoothClosedCurve::circle({0.3, 0.25}, 0.15),
               SmoothClosedCurve::circle({-0.35, -0.2}, 0.18)});
  Point lambda = 1.4 * std::polar(1.0, 0.6);
  auto transform = [&](const SmoothClosedCurve& c) {
    const auto& desc = c.descriptor();
    if (desc.kind == CurveKind::Circle) {
      return SmoothClosedCurve::circle(lambda * desc.center, std::abs(lambda) * desc.radius);
    }
    throw std::runtime_error("unsupported");
  };
  Domain rotated(transform(base.outer()), {transform(base.component(1)),
                                           transform(base.component(2))});
  // Circles are rotation-invariant point sets, so the boundary point at
  // parameter t of the rotated outer circle is lambda * (point at t') with a
  // parameter shift equal to arg(lambda).
  double t_w = 0.9;
  auto r1 = chordal_map(make_er_workspace(make_solver(base)), t_w);
  auto r2 = chordal_map(make_er_workspace(make_solver(rotated)), t_w + std::arg(lambda));

  for (size_t i = 0; i < 2; ++i) {
    const auto& a = r1.slits.slits[i];
    const auto& b = r2.slits.slits[i];
    double aspect1 = (a.x_max - a.x_min) / a.height;
    double aspect2 = (b.x_max - b.x_min) / b.height;
    CHECK(aspect1 == doctest::Approx(aspect2).epsilon(2e-5));
  }
  double hr1 = r1.slits.slits[0].height / r1.slits.slits[1].height;
  double hr2 = r2.slits.slits[0].height / r2.slits.slits[1].height;
  CHECK(hr1 == doctest::Approx(hr2).epsilon(2e-5));
}

TEST_CASE("bilateral map on the annulus is the identity up to rotation") {
  auto result = bilateral_map(annulus_ws(), 1);
  CHECK(result.ring.inner_radius == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(result.conjugate_period_source == doctest::Approx(-kTwoPi).epsilon(1e-6));
  CHECK(result.boundary_modulus_deviation < 1e-5);
  for (Point z : {Point(0.5, 0.2), Point(-0.3, 0.6), Point(0.0, -0.42), Point(0.8, 0.1)}) {
    CHECK(std::abs(result.map->evaluate(z)) == doctest::Approx(std::abs(z)).epsilon(1e-5));
  }
  // Identity up to rotation: f(z)/z has constant argument.
  Point ratio0 = result.map->evaluate(Point(0.5, 0.2)) / Point(0.5, 0.2);
  Point ratio1 = result.map->evaluate(Point(-0.3, 0.6)) / Point(-0.3, 0.6);
  CHECK(std::abs(ratio0 - ratio1) < 1e-5);
}

TEST_CASE("bilateral map: symmetric pair lands at equal radii") {
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0),
           {SmoothClosedCurve::circle({-0.5, 0}, 0.15),
            SmoothClosedCurve::circle({0.28, 0.38}, 0.13),
            SmoothClosedCurve::circle({0.28, -0.38}, 0.13)});
  REQUIRE(d.validate().valid());
  auto ws = make_er_workspace(make_solver(d));
  auto result = bilateral_map(ws, 1);  // source hole on the real axis
  REQUIRE(result.ring.arcs.size() == 2);
  CHECK(result.ring.arcs[0].radius == doctest::Approx(result.ring.arcs[1].radius).epsilon(1e-5));
  for (double dev : result.arc_radial_deviation) CHECK(dev < 1e-6);
  for (double p : result.conjugate_period_others) CHECK(std::abs(p) < 1e-4);
  CHECK(result.conjugate_period_source == doctest::Approx(-kTwoPi).epsilon(1e-4));
}

TEST_CASE("radial map on the disk is a rotation of the identity") {
  auto result = radial_map(disk_ws(), {0, 0});
  for (Point z : {Point(0.3, 0.1), Point(-0.5, 0.4), Point(0.0, -0.8)}) {
    CHECK(std::abs(result.map->evaluate(z)) == doctest::Approx(std::abs(z)).epsilon(1e-5));
  }
  CHECK(result.origin_modulus < 1e-6);
  CHECK(result.boundary_modulus_deviation < 1e-5);
}

TEST_CASE("radial map on the annulus: arc radius consistency") {
  auto result = radial_map(annulus_ws(), {0.6, 0});
  REQUIRE(result.disk.arcs.size() == 1);
  double expected = std::exp(-kPi * result.g_field->component_value(1));
  CHECK(result.disk.arcs[0].radius == doctest::Approx(expected).epsilon(1e-10));
  CHECK(result.arc_radial_deviation[0] < 1e-5);
  CHECK(result.origin_modulus < 1e-6);
  CHECK(result.boundary_modulus_deviation < 1e-5);
}

TEST_CASE("cauchy-riemann residual of the chordal map on probe stencils") {
  auto result = chordal_map(onehole_ws(), 0.0);
  double h = 1e-4;
  for (Point z : {Point(-0.4, 0.3), Point(0.1, -0.5), Point(-0.6, -0.2)}) {
    auto f = [&](Point p) { return result.map->evaluate(p); };
    Point fx = (f(z + Point(h, 0)) - f(z - Point(h, 0))) / (2 * h);
    Point fy = (f(z + Point(0, h)) - f(z - Point(0, h))) / (2 * h);
    // CR: u_x = v_y and u_y = -v_x.
    double res = std::abs(fx.real() - fy.imag()) + std::abs(fx.imag() + fy.real());
    CHECK(res < 1e-5);
  }
}

TEST_CASE("radial map arc radius closed form on the concentric annulus") {
  // For the annulus A_{r,1} with pole z0, the hole flux of the plain Green's
  // function is 2 log|z0|/log r, so c_1 = -log|z0|/pi and the arc radius
  // exp(-pi c_1) equals |z0| exactly.
  for (Point z0 : {Point(0.6, 0), Point(0.0, 0.45), Point(-0.52, 0.3)}) {
    auto result = radial_map(annulus_ws(), z0);
    REQUIRE(result.disk.arcs.size() == 1);
    CHECK(result.disk.arcs[0].radius == doctest::Approx(std::abs(z0)).epsilon(1e-8));
  }
}
