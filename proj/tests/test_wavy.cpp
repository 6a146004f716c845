// End-to-end checks on a genuinely non-circular domain: a wavy Fourier outer
// boundary with a rotated ellipse hole. Oracles here are solver-independent
// (entire harmonic functions, homotopy invariance, Monte Carlo).

#include <cmath>

#include "doctest.h"
#include "erbm/errors.hpp"
#include "erbm/maps.hpp"
#include "erbm/quadrature.hpp"
#include "erbm/sampler.hpp"

using namespace erbm;

namespace {

Domain wavy_domain() {
  // gamma(t) = e^{it} + 0.08 e^{-2it} + 0.05i e^{3it}: smooth, simple,
  // speed bounded away from zero.
  std::vector<Point> coeffs(9, Point(0, 0));  // c_{-4}..c_4
  coeffs[4 - 2] = Point(0.08, 0);
  coeffs[4 + 1] = Point(1, 0);
  coeffs[4 + 3] = Point(0, 0.05);
  auto outer = SmoothClosedCurve::fourier({0, 0}, coeffs);
  auto hole = SmoothClosedCurve::ellipse({0.1, -0.05}, 0.3, 0.18, 0.5);
  return Domain(outer, {hole});
}

SolverPtr wavy_solver() {
  static SolverPtr s = make_solver(wavy_domain());
  return s;
}

}  // namespace

TEST_CASE("wavy domain is valid and collars wind correctly") {
  auto d = wavy_domain();
  REQUIRE(d.validate().valid());
  auto collar = collar_curve(d, 1, 0.5);
  CHECK(collar.curve.winding_number(d.component(1).center()) == 1);
  CHECK(curve_distance(collar.curve, d.outer()) > 0.05);
}

TEST_CASE("entire harmonic data is extended exactly on the wavy domain") {
  // Re z^2 is harmonic on the whole plane, so the solver must reproduce it
  // pointwise regardless of the boundary shape.
  auto u = solve_dirichlet(wavy_solver(), [](int, double, Point z) {
    return (z * z).real();
  });
  for (Point z : {Point(0.55, 0.35), Point(-0.5, -0.3), Point(-0.2, 0.6)}) {
    REQUIRE(wavy_solver()->domain().contains(z));
    CHECK(u.value(z) == doctest::Approx((z * z).real()).epsilon(1e-8));
    CHECK(std::abs(u.gradient(z) - 2.0 * std::conj(z)) < 1e-7);
  }
}

TEST_CASE("green symmetry and kernel mass on the wavy domain") {
  auto solver = wavy_solver();
  Point a(0.55, 0.35), b(-0.5, -0.3);
  auto ga = greens_function(solver, a);
  auto gb = greens_function(solver, b);
  CHECK(std::abs(ga.value(b) - gb.value(a)) < 1e-6);
  CHECK(ga.value(b) > 0);

  auto density = exit_density(solver, a);
  double mass = 0;
  for (int c = 0; c < solver->component_count(); ++c) {
    const auto& cn = solver->component(c);
    for (int j = 0; j < cn.node_count; ++j) {
      mass += density[static_cast<size_t>(c)][static_cast<size_t>(j)] *
              cn.speed[static_cast<size_t>(j)] * cn.h;
    }
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ER structure on the wavy domain") {
  auto ws = make_er_workspace(wavy_solver(), 0.5);
  CHECK(ws->period().eigenvalues.maxCoeff() < 0);

  auto f = er_poisson_kernel(ws, 0.7);
  // Flux condition at an independent collar family.
  auto eta = collar_curve(ws->domain(), 1, 0.33);
  CHECK(std::abs(flux(f, eta.curve, 512)) < 1e-6);
  // Collar independence of the hole constant.
  auto ws6 = make_er_workspace(wavy_solver(), 0.6);
  auto f6 = er_poisson_kernel(ws6, 0.7);
  CHECK(std::abs(f.component_value(1) - f6.component_value(1)) < 1e-5);
  // Positivity probes.
  for (Point z : {Point(-0.5, -0.3), Point(0.6, 0.3), Point(-0.1, 0.55)}) {
    CHECK(f.value(z) > 0);
  }
}

TEST_CASE("bilateral map of the wavy domain hits the canonical ring") {
  auto ws = make_er_workspace(wavy_solver(), 0.5);
  auto result = bilateral_map(ws, 1);
  CHECK(result.ring.inner_radius > 0);
  CHECK(result.ring.inner_radius < 1);
  CHECK(result.boundary_modulus_deviation < 1e-5);
  CHECK(result.conjugate_period_source == doctest::Approx(-kTwoPi).epsilon(1e-4));
  // |f| on a probe ring stays inside the annulus (strictly between radii).
  for (Point z : {Point(0.55, 0.35), Point(-0.45, 0.3), Point(-0.3, -0.45)}) {
    double m = std::abs(result.map->evaluate(z));
    CHECK(m > result.ring.inner_radius - 1e-9);
    CHECK(m < 1.0 + 1e-9);
  }
}

TEST_CASE("sampler matches the deterministic exit law on the wavy domain") {
  RunConfig cfg;
  cfg.seed = 31415;
  cfg.path_count = 30000;
  ErbmSampler sampler(wavy_solver(), cfg);
  auto ws = make_er_workspace(wavy_solver(), 0.5);
  auto cmp = estimate_exit_distribution(sampler, ws, 1, 12);
  CHECK(cmp.tv < 0.03);  // 3e4 paths
}
