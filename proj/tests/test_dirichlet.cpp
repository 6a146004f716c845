#include <cmath>

#include "doctest.h"
#include "erbm/dirichlet.hpp"
#include "erbm/domain.hpp"
#include "erbm/errors.hpp"

using namespace erbm;

namespace {

Domain annulus(double r = 0.25) {
  return Domain(SmoothClosedCurve::circle({0, 0}, 1.0),
                {SmoothClosedCurve::circle({0, 0}, r)});
}

}  // namespace

TEST_CASE("disk: harmonic extension of Re z") {
  Domain disk(SmoothClosedCurve::circle({0, 0}, 1.0), {});
  auto u = solve_dirichlet(disk, [](int, double, Point z) { return z.real(); });
  CHECK(u.value({0.3, 0.4}) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(u.value({0.0, 0.0}) == doctest::Approx(0.0).scale(1).epsilon(1e-10));
  CHECK(u.value({-0.7, 0.2}) == doctest::Approx(-0.7).epsilon(1e-9));
  // Gradient of Re z is (1, 0).
  Point g = u.gradient({0.25, -0.3});
  CHECK(std::abs(g - Point(1, 0)) < 1e-8);
}

TEST_CASE("annulus: radial harmonic oracle a log|z| + b") {
  auto d = annulus();
  auto u = solve_dirichlet(d, [](int comp, double, Point) { return comp == 1 ? 1.0 : 0.0; });
  // Oracle: u = log|z| / log 0.25 matches boundary data 1 on |z|=0.25, 0 on |z|=1.
  auto oracle = [](Point z) { return std::log(std::abs(z)) / std::log(0.25); };
  for (Point z : {Point(0.5, 0), Point(0, -0.5), Point(0.35, 0.35), Point(-0.8, 0.1)}) {
    CHECK(u.value(z) == doctest::Approx(oracle(z)).epsilon(1e-8));
  }
  CHECK(u.value({0.5, 0}) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("constants are reproduced exactly") {
  auto d = annulus();
  auto u = solve_dirichlet(d, [](int, double, Point) { return 1.0; });
  for (Point z : {Point(0.6, 0), Point(0, 0.4), Point(-0.5, 0.5)}) {
    CHECK(u.value(z) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(u.gradient(z)) < 1e-9);
  }
}

TEST_CASE("maximum principle on interior probes") {
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0),
           {SmoothClosedCurve::circle({-0.45, 0}, 0.18),
            SmoothClosedCurve::circle({0.45, 0}, 0.18)});
  auto u = solve_dirichlet(
      d, [](int comp, double t, Point) { return comp == 0 ? std::sin(3 * t) : (comp == 1 ? 0.3 : -0.2); });
  for (int i = 0; i < 200; ++i) {
    double a = kTwoPi * i / 200;
    Point z = 0.8 * std::polar(1.0, a) * 0.9;
    if (!d.contains(z)) continue;
    CHECK(u.value(z) <= u.data_max() + 1e-8);
    CHECK(u.value(z) >= u.data_min() - 1e-8);
  }
}

TEST_CASE("mean-value stencil residual at interior probes") {
  auto d = annulus();
  auto u = solve_dirichlet(d, [](int comp, double t, Point) {
    return comp == 0 ? std::cos(2 * t) : 1.0;
  });
  double h = 1e-2;
  for (Point z : {Point(0.55, 0.1), Point(-0.2, 0.5), Point(0.1, -0.6)}) {
    double c = u.value(z);
    double mean = 0.25 * (u.value(z + Point(h, 0)) + u.value(z - Point(h, 0)) +
                          u.value(z + Point(0, h)) + u.value(z - Point(0, h)));
    CHECK(std::abs(mean - c) < 1e-6);
  }
}

TEST_CASE("boundary limit along normals (Richardson extrapolated)") {
  auto d = annulus();
  auto u = solve_dirichlet(d, [](int comp, double t, Point) {
    return comp == 0 ? std::sin(t) : 0.5;
  });
  double delta = 1e-3;
  for (int i = 0; i < 8; ++i) {
    double t = kTwoPi * i / 8 + 0.1;
    for (int comp : {0, 1}) {
      const auto& curve = d.component(comp);
      Point into = (comp == 0) ? curve.normal_enclosed(t) : curve.normal_away(t);
      Point b = curve.point(t);
      double u1 = u.value(b + delta * into);
      double u2 = u.value(b + 2 * delta * into);
      double limit = 2 * u1 - u2;
      double datum = comp == 0 ? std::sin(t) : 0.5;
      CHECK(std::abs(limit - datum) < 1e-3);
      CHECK(std::abs(u.boundary_trace(comp, t) - datum) < 1e-9);
    }
  }
}

TEST_CASE("near-boundary evaluation stays accurate at offset 1e-3") {
  Domain disk(SmoothClosedCurve::circle({0, 0}, 1.0), {});
  auto u = solve_dirichlet(disk, [](int, double, Point z) { return z.real(); });
  // Exact solution is Re z everywhere; probe very close to the boundary.
  for (double off : {1e-2, 1e-3, 3e-4}) {
    Point z = std::polar(1.0 - off, 0.77);
    CHECK(u.value(z) == doctest::Approx(z.real()).epsilon(1e-7));
    CHECK(std::abs(u.gradient(z) - Point(1, 0)) < 1e-5);
  }
}

TEST_CASE("solver reports a condition estimate") {
  auto d = annulus();
  auto solver = make_solver(d);
  CHECK(solver->condition_estimate() > 1.0);
  CHECK(solver->condition_estimate() < 1e6);
}
