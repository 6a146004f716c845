#include <cmath>

#include "doctest.h"
#include "erbm/constants.hpp"
#include "erbm/domain.hpp"
#include "erbm/domain_io.hpp"
#include "erbm/errors.hpp"

using namespace erbm;

namespace {

Domain annulus(double r = 0.25) {
  return Domain(SmoothClosedCurve::circle({0, 0}, 1.0),
                {SmoothClosedCurve::circle({0, 0}, r)});
}

}  // namespace

TEST_CASE("circle parameterization and frames") {
  auto c = SmoothClosedCurve::circle({0, 0}, 1.0);
  CHECK(std::abs(c.point(0) - Point(1, 0)) < 1e-14);
  CHECK(std::abs(c.point(kPi / 2) - Point(0, 1)) < 1e-14);
  CHECK(c.speed(0.3) == doctest::Approx(1.0).epsilon(1e-13));
  // Enclosed-side normal at t=0 points toward the center.
  CHECK(std::abs(c.normal_enclosed(0) - Point(-1, 0)) < 1e-13);

  auto c2 = SmoothClosedCurve::circle({0, 0}, 2.0);
  for (double t : {0.0, 0.7, 2.0, 5.5}) CHECK(c2.speed(t) == doctest::Approx(2.0));
}

TEST_CASE("degenerate ellipse equals circle; ellipse endpoint speed") {
  auto e = SmoothClosedCurve::ellipse({0, 0}, 1.0, 1.0, 0.0);
  auto c = SmoothClosedCurve::circle({0, 0}, 1.0);
  for (int i = 0; i < 16; ++i) {
    double t = kTwoPi * i / 16;
    CHECK(std::abs(e.point(t) - c.point(t)) < 1e-14);
  }
  auto e2 = SmoothClosedCurve::ellipse({0, 0}, 2.0, 1.0, 0.0);
  CHECK(std::abs(e2.point(0) - Point(2, 0)) < 1e-14);
  CHECK(e2.speed(0) == doctest::Approx(1.0));  // |gamma'| = b at the major-axis endpoint
}

TEST_CASE("single-mode fourier curve is the unit circle") {
  std::vector<Point> coeffs = {{0, 0}, {0, 0}, {1, 0}};  // c_{-1}, c_0, c_1
  auto f = SmoothClosedCurve::fourier({0, 0}, coeffs);
  auto c = SmoothClosedCurve::circle({0, 0}, 1.0);
  for (int i = 0; i < 32; ++i) {
    double t = kTwoPi * i / 32;
    CHECK(std::abs(f.point(t) - c.point(t)) < 1e-14);
  }
}

TEST_CASE("tangent and normal are orthonormal") {
  auto e = SmoothClosedCurve::ellipse({0.2, -0.1}, 1.5, 0.8, 0.4);
  for (int i = 0; i < 64; ++i) {
    double t = kTwoPi * i / 64;
    CHECK(std::abs(dot(e.unit_tangent(t), e.normal_enclosed(t))) < 1e-12);
    CHECK(std::abs(std::abs(e.unit_tangent(t)) - 1) < 1e-12);
  }
}

TEST_CASE("non-simple and degenerate curves are rejected") {
  // Figure-eight-like trig curve: gamma(t) = e^{it} + 1.2 e^{-it} gives a
  // curve traversed with negative-to-positive flips; build one that truly
  // self-intersects: limacon with inner loop.
  std::vector<Point> limacon = {{0, 0}, {0, 0}, {0.5, 0}, {0, 0}, {0.4, 0}};  // c_{-2..2}
  CHECK_THROWS_AS(SmoothClosedCurve::fourier({0, 0}, limacon),
                  Error);  // inner loop self-intersects
  CHECK_THROWS_AS(SmoothClosedCurve::circle({0, 0}, -1.0), Error);
  CHECK_THROWS_AS(SmoothClosedCurve::circle({0, 0}, 0.0), Error);
}

TEST_CASE("domain validity: annulus, overlapping holes, hole outside") {
  CHECK(annulus().validate().valid());

  Domain overlap(SmoothClosedCurve::circle({0, 0}, 1.0),
                 {SmoothClosedCurve::circle({-0.1, 0}, 0.2),
                  SmoothClosedCurve::circle({0.1, 0}, 0.2)});
  auto rep = overlap.validate();
  REQUIRE(!rep.valid());
  CHECK(rep.violations.front().kind == DomainViolation::Kind::HolesIntersect);

  Domain outside(SmoothClosedCurve::circle({0, 0}, 1.0),
                 {SmoothClosedCurve::circle({3, 0}, 0.2)});
  auto rep2 = outside.validate();
  REQUIRE(!rep2.valid());
  CHECK(rep2.violations.front().kind == DomainViolation::Kind::HoleOutsideOuter);
}

TEST_CASE("winding numbers of domain components") {
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0),
           {SmoothClosedCurve::circle({-0.45, 0}, 0.18),
            SmoothClosedCurve::circle({0.45, 0}, 0.18)});
  CHECK(d.outer().winding_number(d.component(1).center()) == 1);
  CHECK(d.outer().winding_number(d.component(2).center()) == 1);
  CHECK(d.component(1).winding_number(d.component(2).center()) == 0);
  CHECK(d.component(2).winding_number(d.component(1).center()) == 0);
  CHECK(d.contains({0, 0.5}));
  CHECK(!d.contains({0.45, 0}));
  CHECK(!d.contains({1.5, 0}));
}

TEST_CASE("collar offset on the concentric annulus") {
  auto d = annulus();
  auto collar = collar_curve(d, 1, 0.5);
  // Offset rule: 0.25 + 0.5 * 0.75 = 0.625.
  for (int i = 0; i < 32; ++i) {
    double t = kTwoPi * i / 32;
    CHECK(std::abs(std::abs(collar.curve.point(t)) - 0.625) < 1e-9);
  }
  CHECK(collar.curve.winding_number({0, 0}) == 1);
}

TEST_CASE("two well-separated holes give disjoint collars") {
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0),
           {SmoothClosedCurve::circle({-0.45, 0}, 0.18),
            SmoothClosedCurve::circle({0.45, 0}, 0.18)});
  auto c1 = collar_curve(d, 1, 0.5);
  auto c2 = collar_curve(d, 2, 0.5);
  CHECK(c1.curve.winding_number(d.component(1).center()) == 1);
  CHECK(c1.curve.winding_number(d.component(2).center()) == 0);
  CHECK(c2.curve.winding_number(d.component(2).center()) == 1);
  CHECK(c2.curve.winding_number(d.component(1).center()) == 0);
  CHECK(curve_distance(c1.curve, c2.curve) > 0.05);
}

TEST_CASE("collar factor too large near touching holes fails") {
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0),
           {SmoothClosedCurve::circle({-0.26, 0}, 0.24),
            SmoothClosedCurve::circle({0.26, 0}, 0.24)});
  REQUIRE(d.validate().valid());
  CHECK_THROWS_AS(collar_curve(d, 1, 0.99), Error);
}

TEST_CASE("collar is stable under hole node_count refinement") {
  auto d = annulus();
  auto c1 = collar_curve(d, 1, 0.5);
  auto c2 = collar_curve(d.with_node_count(512), 1, 0.5);
  double hausdorff = 0;
  for (int i = 0; i < 256; ++i) {
    double t = kTwoPi * i / 256;
    hausdorff = std::max(hausdorff, c2.curve.closest_point(c1.curve.point(t)).distance);
    hausdorff = std::max(hausdorff, c1.curve.closest_point(c2.curve.point(t)).distance);
  }
  CHECK(hausdorff < 1e-8);
}

TEST_CASE("domain file parsing and errors") {
  auto d = parse_domain_string(
      "# a comment\n"
      "outer circle 0 0 1\n"
      "hole circle 0 0 0.25  # trailing comment\n");
  CHECK(d.hole_count() == 1);
  CHECK(d.validate().valid());

  CHECK_THROWS_WITH_AS(parse_domain_string("outer circle 0 0\n"),
                       doctest::Contains("<string>:1"), Error);
  CHECK_THROWS_WITH_AS(parse_domain_string("outer circle 0 0 1\nblah circle 0 0 0.2\n"),
                       doctest::Contains(":2"), Error);
  CHECK_THROWS_AS(parse_domain_string("hole circle 0 0 0.25\n"), Error);

  // Round-trip through the formatter.
  auto e = parse_domain_string(format_domain(d));
  CHECK(e.hole_count() == 1);

  // Invalid geometry reported with the offending lines.
  CHECK_THROWS_WITH_AS(
      parse_domain_string("outer circle 0 0 1\nhole circle -0.1 0 0.2\nhole circle 0.1 0 0.2\n"),
      doctest::Contains("line 2"), Error);
}

TEST_CASE("fourier curve orientation is normalized to ccw") {
  // c_{-1} = 1 parameterizes the unit circle clockwise; expect a flip.
  std::vector<Point> coeffs = {{1, 0}, {0, 0}, {0, 0}};
  auto f = SmoothClosedCurve::fourier({0, 0}, coeffs);
  CHECK(f.signed_area() > 0);
}

TEST_CASE("winding by discretized argument-principle sum") {
  // Independent of the crossing-count implementation: accumulate arguments
  // over the sample polygon and check the pre-rounding deviation.
  Domain d(SmoothClosedCurve::circle({0, 0}, 1.0),
           {SmoothClosedCurve::circle({-0.45, 0}, 0.18),
            SmoothClosedCurve::circle({0.45, 0}, 0.18)});
  auto arg_sum_winding = [](const SmoothClosedCurve& c, Point z) {
    const auto& pts = c.sample_polygon();
    double total = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      total += std::arg((pts[i + 1] - z) / (pts[i] - z));
    }
    return total / kTwoPi;
  };
  for (int i = 1; i <= 2; ++i) {
    double w_outer = arg_sum_winding(d.outer(), d.component(i).center());
    CHECK(std::abs(w_outer - 1.0) < 1e-6);
    CHECK(d.outer().winding_number(d.component(i).center()) == 1);
    for (int j = 1; j <= 2; ++j) {
      if (i == j) continue;
      double w_other = arg_sum_winding(d.component(j), d.component(i).center());
      CHECK(std::abs(w_other) < 1e-6);
    }
  }
}
