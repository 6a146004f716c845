#include <cmath>

#include "doctest.h"
#include "erbm/er.hpp"
#include "erbm/errors.hpp"
#include "oracles.hpp"

using namespace erbm;

namespace {

SolverPtr annulus_solver(double r = 0.25) {
  return make_solver(
      Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {SmoothClosedCurve::circle({0, 0}, r)}));
}

SolverPtr twohole_solver() {
  static SolverPtr s = make_solver(
      Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {SmoothClosedCurve::circle({-0.45, 0}, 0.18),
                                                      SmoothClosedCurve::circle({0.45, 0}, 0.18)}));
  return s;
}

}  // namespace

TEST_CASE("period matrix: annulus oracle, empty case") {
  auto P = period_matrix(annulus_solver(), 0.5);
  REQUIRE(P.matrix.rows() == 1);
  CHECK(P.matrix(0, 0) == doctest::Approx(-kTwoPi / std::log(4.0)).epsilon(1e-5));
  CHECK(P.eigenvalues(0) < 0);

  auto disk = make_solver(Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {}));
  auto P0 = period_matrix(disk, 0.5);
  CHECK(P0.matrix.rows() == 0);
}

TEST_CASE("period matrix: random 3-hole symmetry and negativity") {
  Domain d(SmoothClosedCurve::circle({0.05, -0.02}, 1.1),
           {SmoothClosedCurve::circle({-0.42, 0.31}, 0.17),
            SmoothClosedCurve::circle({0.38, 0.42}, 0.14),
            SmoothClosedCurve::ellipse({0.18, -0.48}, 0.21, 0.13, 0.6)});
  REQUIRE(d.validate().valid());
  auto P = period_matrix(make_solver(d), 0.5);
  CHECK(P.symmetry_residual < 1e-6);
  for (int i = 0; i < 3; ++i) CHECK(P.eigenvalues(i) < 0);

  // Independent flux quadrature at doubled resolution.
  auto ws = make_er_workspace(make_solver(d), 0.5);
  for (int j = 1; j <= 3; ++j) {
    for (int i = 1; i <= 3; ++i) {
      double fine = flux(ws->omega(i), ws->collar(j).curve, 1024);
      CHECK(fine == doctest::Approx(P.matrix(j - 1, i - 1)).epsilon(1e-8));
    }
  }
}

TEST_CASE("constants are ER-harmonic: data 1 gives the constant solution") {
  auto ws = make_er_workspace(twohole_solver());
  auto f = solve_er_harmonic(ws, [](double) { return 1.0; });
  CHECK(f.component_value(1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(f.component_value(2) == doctest::Approx(1.0).epsilon(1e-8));
  for (Point z : {Point(0, 0.5), Point(0.1, -0.3)}) {
    CHECK(f.value(z) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("mirror-symmetric holes give equal constants for symmetric data") {
  auto ws = make_er_workspace(twohole_solver());
  // Data symmetric under z -> -conj(z) (mirror about the imaginary axis):
  // cos(2t) is invariant under t -> pi - t.
  auto f = solve_er_harmonic(ws, [](double t) { return std::cos(2 * t); });
  CHECK(f.component_value(1) == doctest::Approx(f.component_value(2)).epsilon(1e-6));
}

TEST_CASE("er fields satisfy the flux conditions at independent collars") {
  auto ws = make_er_workspace(twohole_solver());
  auto f = solve_er_harmonic(ws, [](double t) { return std::sin(t) + 0.3 * std::cos(3 * t); });
  // Fluxes at a different collar family and doubled quadrature.
  for (int j = 1; j <= 2; ++j) {
    auto eta = collar_curve(ws->domain(), j, 0.37);
    CHECK(std::abs(flux(f, eta.curve, 512)) < 1e-6);
  }
  // Constant on each hole boundary.
  for (int i = 1; i <= 2; ++i) {
    double c = f.component_value(i);
    for (double t : {0.0, 1.0, 2.5, 4.0, 5.5}) {
      CHECK(f.boundary_trace(i, t) == doctest::Approx(c).epsilon(1e-8));
    }
  }
}

TEST_CASE("ER maximum principle") {
  auto ws = make_er_workspace(twohole_solver());
  auto f = solve_er_harmonic(ws, [](double t) { return std::sin(t); });
  REQUIRE(f.data_range().has_value());
  auto [lo, hi] = *f.data_range();
  for (int i = 0; i < 300; ++i) {
    Point z = Point(-0.95 + 1.9 * (i % 20) / 19.0, -0.95 + 1.9 * (i / 20) / 14.0);
    if (!ws->domain().contains(z)) continue;
    if (ws->domain().closest_boundary(z).distance < 1e-2) continue;
    double v = f.value(z);
    CHECK(v <= hi + 1e-6);
    CHECK(v >= lo - 1e-6);
  }
  CHECK(f.component_value(1) <= hi + 1e-6);
  CHECK(f.component_value(1) >= lo - 1e-6);
}

TEST_CASE("linearity of the ER solve") {
  auto ws = make_er_workspace(annulus_solver());
  auto f = solve_er_harmonic(ws, [](double t) { return std::sin(t); });
  auto g = solve_er_harmonic(ws, [](double t) { return std::cos(2 * t); });
  auto fg = solve_er_harmonic(ws, [](double t) { return 2.0 * std::sin(t) - 0.5 * std::cos(2 * t); });
  for (Point z : {Point(0.5, 0.2), Point(-0.6, 0.1)}) {
    CHECK(fg.value(z) == doctest::Approx(2.0 * f.value(z) - 0.5 * g.value(z)).epsilon(1e-8));
  }
  CHECK(fg.component_value(1) ==
        doctest::Approx(2.0 * f.component_value(1) - 0.5 * g.component_value(1)).epsilon(1e-8));
}

TEST_CASE("er poisson kernel: no holes reduces to the plain kernel") {
  auto disk = make_solver(Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {}));
  auto ws = make_er_workspace(disk);
  auto f = er_poisson_kernel(ws, 0.0);
  for (Point z : {Point(0.5, 0), Point(-0.2, 0.4)}) {
    CHECK(f.value(z) == doctest::Approx(poisson_kernel(disk, z, {0, 0.0})).epsilon(1e-10));
  }
}

TEST_CASE("er poisson kernel on the annulus: rotational symmetry of the hole constant") {
  auto ws = make_er_workspace(annulus_solver());
  auto f1 = er_poisson_kernel(ws, 0.0);
  auto f2 = er_poisson_kernel(ws, 2.2);
  CHECK(f1.component_value(1) == doctest::Approx(f2.component_value(1)).epsilon(1e-8));
  // Positive inside, tends to zero at the outer boundary away from w.
  for (Point z : {Point(0.6, 0.3), Point(-0.5, -0.4), Point(0.0, 0.55)}) {
    CHECK(f1.value(z) > 0);
  }
  for (double t : {1.5, kPi, 5.0}) {
    double b1 = f1.value(ws->domain().outer().point(t) * 0.999);
    double b2 = f1.value(ws->domain().outer().point(t) * 0.998);
    CHECK(std::abs(2 * b1 - b2) < 1e-3);  // extrapolated boundary limit
  }
  // ER harmonicity at an independent collar.
  auto eta = collar_curve(ws->domain(), 1, 0.61);
  CHECK(std::abs(flux(f1, eta.curve, 512)) < 1e-6);
}

TEST_CASE("er green: no holes equals the plain green's function") {
  auto disk = make_solver(Domain(SmoothClosedCurve::circle({0, 0}, 1.0), {}));
  auto ws = make_er_workspace(disk);
  auto g = er_green(ws, {0, 0});
  CHECK(g.value({0.5, 0}) == doctest::Approx(std::log(2.0) / kPi).epsilon(1e-6));
}

TEST_CASE("er green on the annulus: trace, fluxes, source flux, positivity") {
  auto ws = make_er_workspace(annulus_solver());
  Point pole(0.6, 0);
  auto g = er_green(ws, pole);
  // Zero trace on the outer boundary.
  for (double t : {0.0, 1.3, 2.9, 4.4}) CHECK(std::abs(g.boundary_trace(0, t)) < 1e-8);
  // Zero flux around the hole (independent pole-free collar).
  auto eta = collar_curve(ws->domain(), 1, 0.42);
  CHECK(std::abs(flux(g, eta.curve, 512)) < 1e-6);
  // A loop enclosing both the hole and the pole carries the source flux -2.
  auto eta_wide = collar_curve(ws->domain(), 1, 0.7);
  REQUIRE(eta_wide.curve.winding_number(pole) == 1);
  CHECK(flux(g, eta_wide.curve, 512) == doctest::Approx(-2.0).epsilon(1e-6));
  // Source flux -2 around a small circle about the pole.
  auto loop = SmoothClosedCurve::circle(pole, 0.08);
  CHECK(flux(g, loop, 512) == doctest::Approx(-2.0).epsilon(1e-4));
  // Positivity on a probe grid.
  for (int i = 0; i < 64; ++i) {
    Point z = Point(-0.9 + 1.8 * (i % 8) / 7.0, -0.9 + 1.8 * (i / 8) / 7.0);
    if (!ws->domain().contains(z)) continue;
    if (std::abs(z - pole) < 0.05) continue;
    CHECK(g.value(z) > -1e-9);
  }
}

TEST_CASE("er green component: annulus closed form -log|z|/pi") {
  auto ws = make_er_workspace(annulus_solver());
  auto g = er_green_component(ws, 1);
  CHECK(g.value({0.5, 0}) == doctest::Approx(std::log(2.0) / kPi).epsilon(1e-6));
  CHECK(g.value({0.0, 0.7}) == doctest::Approx(-std::log(0.7) / kPi).epsilon(1e-6));
  for (double t : {0.5, 2.0, 3.7}) CHECK(std::abs(g.boundary_trace(0, t)) < 1e-6);
  // Flux -2 around the source hole, collar-independent.
  for (double factor : {0.35, 0.6}) {
    auto eta = collar_curve(ws->domain(), 1, factor);
    CHECK(flux(g, eta.curve, 512) == doctest::Approx(-2.0).epsilon(1e-6));
  }
}

TEST_CASE("er green component: mirror symmetry between two holes") {
  auto ws = make_er_workspace(twohole_solver());
  auto g1 = er_green_component(ws, 1);
  auto g2 = er_green_component(ws, 2);
  for (Point z : {Point(0.2, 0.3), Point(-0.1, -0.5), Point(0.6, 0.2)}) {
    Point mirrored(-z.real(), z.imag());
    CHECK(g1.value(z) == doctest::Approx(g2.value(mirrored)).epsilon(1e-6));
  }
  // Flux 0 around the non-source hole.
  auto eta2 = collar_curve(ws->domain(), 2, 0.5);
  CHECK(std::abs(flux(g1, eta2.curve, 512)) < 1e-6);
}

TEST_CASE("restart density: concentric annulus is uniform") {
  auto solver = annulus_solver();
  auto rho = restart_density(solver, 1, 0.5);
  double expected = 1.0 / (kTwoPi * 0.625);
  for (double t : {0.0, 1.0, 2.5, 4.0, 5.8}) {
    CHECK(rho.value(t) == doctest::Approx(expected).epsilon(1e-7));
  }
  // Total mass 1 by construction; verify via independent quadrature.
  double mass = 0;
  const int m = 2048;
  for (int j = 0; j < m; ++j) {
    double t = kTwoPi * j / m;
    mass += rho.value(t) * rho.collar().curve.speed(t) * (kTwoPi / m);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  // Inverse CDF of the uniform density is linear in arclength.
  CHECK(rho.sample_parameter(0.25) == doctest::Approx(kTwoPi / 4).epsilon(1e-4));
  CHECK(rho.sample_parameter(0.5) == doctest::Approx(kPi).epsilon(1e-4));
}

TEST_CASE("restart density: off-center hole, doubled-resolution agreement") {
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0), {SmoothClosedCurve::circle({0.3, 0.1}, 0.2)});
  auto rho1 = restart_density(make_solver(d), 1, 0.5);
  auto rho2 = restart_density(make_solver(d.with_node_count(512)), 1, 0.5);
  for (int j = 0; j < 32; ++j) {
    double t = kTwoPi * j / 32;
    CHECK(std::abs(rho1.value(t) - rho2.value(t)) < 1e-6);
    CHECK(rho1.value(t) > 0);
  }
}

TEST_CASE("boundary chain: annulus gambler's-ruin oracle") {
  auto ws = make_er_workspace(annulus_solver());
  auto chain = boundary_chain(ws);
  double q_outer = std::log(0.625 / 0.25) / std::log(1.0 / 0.25);
  CHECK(chain.q(0, 0) == doctest::Approx(q_outer).epsilon(1e-6));
  CHECK(chain.q(0, 1) == doctest::Approx(1.0 - q_outer).epsilon(1e-6));
  CHECK(chain.q(0, 0) == doctest::Approx(0.66096).epsilon(1e-4));
  CHECK(chain.p_tilde(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chain.q.row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary chain: two mirror holes, rows sum to one, absorption") {
  auto ws = make_er_workspace(twohole_solver());
  auto chain = boundary_chain(ws);
  for (int i = 0; i < 2; ++i) {
    CHECK(chain.q.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(chain.p_tilde.row(i).sum() == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(chain.p_tilde(0, 2) == doctest::Approx(chain.p_tilde(1, 1)).epsilon(1e-6));
  CHECK(chain.hole_block_spectral_radius < 1.0);
}

TEST_CASE("collar independence: p_tilde and ER constants across factors") {
  auto solver = twohole_solver();
  auto ws4 = make_er_workspace(solver, 0.4);
  auto ws6 = make_er_workspace(solver, 0.6);

  auto c4 = boundary_chain(ws4);
  auto c6 = boundary_chain(ws6);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k <= 2; ++k) {
      CHECK(std::abs(c4.p_tilde(i, k) - c6.p_tilde(i, k)) < 1e-4);
    }
  }

  auto f4 = solve_er_harmonic(ws4, [](double t) { return std::sin(t) + 0.2 * std::cos(2 * t); });
  auto f6 = solve_er_harmonic(ws6, [](double t) { return std::sin(t) + 0.2 * std::cos(2 * t); });
  for (int i = 1; i <= 2; ++i) {
    CHECK(std::abs(f4.component_value(i) - f6.component_value(i)) < 1e-5);
  }
}

TEST_CASE("flux homotopy invariance for harmonic fields") {
  auto ws = make_er_workspace(twohole_solver());
  const auto& w1 = ws->omega(1);
  auto eta_a = collar_curve(ws->domain(), 1, 0.3);
  auto eta_b = collar_curve(ws->domain(), 1, 0.7);
  CHECK(flux(w1, eta_a.curve, 512) == doctest::Approx(flux(w1, eta_b.curve, 512)).epsilon(1e-8));
}

TEST_CASE("er harmonic measure: normalization, symmetry, partition") {
  auto ws = make_er_workspace(annulus_solver());
  // V = whole outer boundary -> 1 from anywhere.
  CHECK(er_harmonic_measure(ws, Point(0.5, 0.2), BoundaryArc::whole_component(0)) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(er_harmonic_measure(ws, 1, BoundaryArc::whole_component(0)) ==
        doctest::Approx(1.0).epsilon(1e-8));
  // Hole start, half circle: 0.5 by symmetry.
  CHECK(er_harmonic_measure(ws, 1, BoundaryArc::arc(0, 0, kPi)) ==
        doctest::Approx(0.5).epsilon(1e-6));
  // Partition of the outer circle into 4 arcs sums to one.
  double total = 0;
  for (int b = 0; b < 4; ++b) {
    total += er_harmonic_measure(ws, 1, BoundaryArc::arc(0, kTwoPi * b / 4, kTwoPi * (b + 1) / 4));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ill-conditioned and invalid inputs throw") {
  auto ws = make_er_workspace(annulus_solver());
  CHECK_THROWS_AS(er_green_component(ws, 5), Error);
  CHECK_THROWS_AS(er_harmonic_measure(ws, Point(0, 0), BoundaryArc::whole_component(0)), Error);
  CHECK_THROWS_AS(restart_density(ws->solver(), 2, 0.5), Error);
}

TEST_CASE("chain absorption matches hole-start measure totals") {
  auto ws = make_er_workspace(twohole_solver());
  auto chain = boundary_chain(ws);
  const int n = 2;
  // Absorption probabilities a solve (I - Q) a = r with Q the hole-to-hole
  // block of p_tilde and r the outer column; the chain is absorbing, so a = 1.
  Eigen::MatrixXd Q(n, n);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    r(i) = chain.p_tilde(i, 0);
    for (int k = 0; k < n; ++k) Q(i, k) = chain.p_tilde(i, k + 1);
  }
  Eigen::VectorXd absorb = (Eigen::MatrixXd::Identity(n, n) - Q).lu().solve(r);
  for (int i = 1; i <= n; ++i) {
    double total = er_harmonic_measure(ws, i, BoundaryArc::whole_component(0));
    CHECK(std::abs(absorb(i - 1) - total) < 1e-5);
  }
}
