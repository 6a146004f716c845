#include "erbm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"
#include "erbm/quadrature.hpp"

namespace erbm {

namespace {

double wrap_angle(double x) {
  x = std::fmod(x, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x;
}

// Smooth periodic arc indicator: erf transitions of half-width `width`
// at t0 (up) and t1 (down), summed over adjacent periods. Exactly additive
// across shared endpoints.
double arc_indicator(double t, double t0, double t1, double width) {
  auto step = [width](double x) { return 0.5 * (1.0 + std::erf(x / width)); };
  double acc = 0;
  for (int m = -1; m <= 1; ++m) {
    double shift = kTwoPi * m;
    acc += step(t - t0 + shift) - step(t - t1 + shift);
  }
  return acc;
}

}  // namespace

double flux(const HarmonicField& field, const SmoothClosedCurve& curve, int quad_nodes) {
  const int n = quad_nodes > 0 ? quad_nodes : std::max(256, curve.node_count());
  double acc = 0;
  for (int j = 0; j < n; ++j) {
    double t = kTwoPi * j / n;
    Point grad = field.gradient(curve.point(t));
    acc += dot(grad, curve.normal_away(t)) * curve.speed(t);
  }
  return acc * kTwoPi / n;
}

double flux(const HarmonicField& field, const Domain& domain, const SmoothClosedCurve& curve,
            int quad_nodes) {
  const int n = 64;
  for (int j = 0; j < n; ++j) {
    Point p = curve.point(kTwoPi * j / n);
    if (domain.closest_boundary(p).distance <= 1e-9 * domain.diameter() || !domain.contains(p)) {
      throw Error(ErrorCode::CurveTouchesBoundary, "flux curve touches the domain boundary");
    }
  }
  return flux(field, curve, quad_nodes);
}

PoissonKernelField::PoissonKernelField(SolverPtr solver, BoundaryPoint w0)
    : solver_(std::move(solver)), w0_(w0) {
  const auto& curve = solver_->domain().component(w0.component);
  w_ = curve.point(w0.t);
  nu_ = (w0.component == 0) ? curve.normal_enclosed(w0.t) : curve.normal_away(w0.t);
  const Point wp = curve.derivative(w0.t);
  const Point wpp = curve.second_derivative(w0.t);
  const double scale = solver_->scale();

  // Dirichlet data = trace of the dipole S(z) = (1/pi) nu.(z - w0)/|z - w0|^2.
  // On the w0 component the trace has a removable singularity at w0 with
  // limit nu.gamma''/(2 pi |gamma'|^2).
  const double diag = dot(nu_, wpp) / (2.0 * kPi * norm2(wp));
  auto data = [&](int, double, Point z) {
    Point d = z - w_;
    double d2 = norm2(d);
    if (d2 < 1e-12 * scale * scale) return diag;
    return dot(nu_, d) / (kPi * d2);
  };
  correction_ = std::make_shared<HarmonicSolution>(solve_dirichlet(solver_, data));
}

double PoissonKernelField::dipole_value(Point z) const {
  Point d = z - w_;
  return dot(nu_, d) / (kPi * norm2(d));
}

double PoissonKernelField::value(Point z) const {
  return dipole_value(z) - correction_->value(z);
}

Point PoissonKernelField::gradient(Point z) const {
  // S = Re[c/(z-w)] with vector c = nu/pi; grad = conj(-c/(z-w)^2).
  Point c(nu_.real() / kPi, nu_.imag() / kPi);
  Point d = z - w_;
  Point grad_dipole = std::conj(-c / (d * d));
  return grad_dipole - correction_->gradient(z);
}

double PoissonKernelField::boundary_trace(int comp, double t) const {
  const auto& curve = solver_->domain().component(comp);
  Point z = curve.point(t);
  Point d = z - w_;
  const double scale = solver_->scale();
  double dip;
  if (norm2(d) < 1e-12 * scale * scale) {
    const Point wp = curve.derivative(w0_.t);
    const Point wpp = curve.second_derivative(w0_.t);
    dip = dot(nu_, wpp) / (2.0 * kPi * norm2(wp));
  } else {
    dip = dot(nu_, d) / (kPi * norm2(d));
  }
  return dip - correction_->boundary_trace(comp, t);
}

double poisson_kernel(SolverPtr solver, Point z, BoundaryPoint w) {
  if (!solver->domain().contains(z)) {
    throw Error(ErrorCode::InvalidArgument, "evaluation point not inside the domain");
  }
  PoissonKernelField field(solver, w);
  return field.value(z);
}

std::vector<std::vector<double>> exit_density(SolverPtr solver, Point z) {
  const int n_holes = solver->domain().hole_count();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(solver->total_nodes() + n_holes);
  for (int comp = 0; comp < solver->component_count(); ++comp) {
    const auto& cn = solver->component(comp);
    const double factor = cn.sigma * cn.h / kTwoPi;
    for (int j = 0; j < cn.node_count; ++j) {
      c(solver->index(comp, j)) =
          factor * (cn.wp[static_cast<size_t>(j)] / (cn.w[static_cast<size_t>(j)] - z)).imag();
    }
  }
  for (int k = 0; k < n_holes; ++k) {
    c(solver->total_nodes() + k) = std::log(std::abs(z - solver->hole_center(k)));
  }
  Eigen::VectorXd d = solver->transpose_solve(c);
  std::vector<std::vector<double>> density(static_cast<size_t>(solver->component_count()));
  for (int comp = 0; comp < solver->component_count(); ++comp) {
    const auto& cn = solver->component(comp);
    auto& row = density[static_cast<size_t>(comp)];
    row.resize(static_cast<size_t>(cn.node_count));
    for (int j = 0; j < cn.node_count; ++j) {
      row[static_cast<size_t>(j)] =
          d(solver->index(comp, j)) / (cn.speed[static_cast<size_t>(j)] * cn.h);
    }
  }
  return density;
}

double component_feature_scale(const NystromSolver& solver, int comp) {
  return solver.feature_scale(comp);
}

double boundary_normal_derivative(const HarmonicField& field, SolverPtr solver, BoundaryPoint at,
                                  double boundary_value) {
  const auto& curve = solver->domain().component(at.component);
  Point b = curve.point(at.t);
  Point into = (at.component == 0) ? curve.normal_enclosed(at.t) : curve.normal_away(at.t);
  double d = 2e-3 * component_feature_scale(*solver, at.component);
  // Five-point one-sided first derivative with the boundary value included.
  double u1 = field.value(b + d * into);
  double u2 = field.value(b + 2 * d * into);
  double u3 = field.value(b + 3 * d * into);
  double u4 = field.value(b + 4 * d * into);
  return (-25.0 * boundary_value + 48.0 * u1 - 36.0 * u2 + 16.0 * u3 - 3.0 * u4) / (12.0 * d);
}

double boundary_poisson_kernel(SolverPtr solver, BoundaryPoint w, BoundaryPoint z) {
  const auto& domain = solver->domain();
  Point wp = domain.component(w.component).point(w.t);
  Point zp = domain.component(z.component).point(z.t);
  if (w.component == z.component && std::abs(wp - zp) < kNearDiagonalArclength) {
    throw Error(ErrorCode::PointsTooClose,
                "boundary kernel arguments on the same component closer than 1e-3");
  }
  PoissonKernelField hz(solver, z);
  // d/dn_w of H_D(., z); the field's trace at w is kept in the stencil.
  double trace = hz.boundary_trace(w.component, w.t);
  const auto& curve = domain.component(w.component);
  Point into = (w.component == 0) ? curve.normal_enclosed(w.t) : curve.normal_away(w.t);
  double feature = component_feature_scale(*solver, w.component);
  double d = 2e-3 * std::min(feature, std::abs(wp - zp));
  double u1 = hz.value(wp + d * into);
  double u2 = hz.value(wp + 2 * d * into);
  double u3 = hz.value(wp + 3 * d * into);
  double u4 = hz.value(wp + 4 * d * into);
  return (-25.0 * trace + 48.0 * u1 - 36.0 * u2 + 16.0 * u3 - 3.0 * u4) / (12.0 * d);
}

std::vector<std::vector<double>> arc_indicator_data(SolverPtr solver, const BoundaryArc& arc) {
  std::vector<std::vector<double>> data(static_cast<size_t>(solver->component_count()));
  for (int c = 0; c < solver->component_count(); ++c) {
    const auto& cn = solver->component(c);
    auto& row = data[static_cast<size_t>(c)];
    row.assign(static_cast<size_t>(cn.node_count), 0.0);
    if (c != arc.component) continue;
    if (arc.whole) {
      row.assign(static_cast<size_t>(cn.node_count), 1.0);
      continue;
    }
    double t0 = wrap_angle(arc.t0);
    double t1 = t0 + wrap_angle(arc.t1 - arc.t0);
    double width = 2.0 * cn.h;
    for (int j = 0; j < cn.node_count; ++j) {
      row[static_cast<size_t>(j)] = arc_indicator(cn.t[static_cast<size_t>(j)], t0, t1, width);
    }
  }
  return data;
}

HarmonicSolution harmonic_measure_field(SolverPtr solver, const BoundaryArc& arc) {
  if (arc.component < 0 || arc.component >= solver->component_count()) {
    throw Error(ErrorCode::InvalidArgument, "arc component out of range");
  }
  auto data = arc_indicator_data(solver, arc);
  return solve_dirichlet(std::move(solver), std::move(data));
}

double harmonic_measure(SolverPtr solver, Point z, const BoundaryArc& arc) {
  if (!solver->domain().contains(z)) {
    throw Error(ErrorCode::InvalidArgument, "evaluation point not inside the domain");
  }
  return harmonic_measure_field(std::move(solver), arc).value(z);
}

HarmonicSolution h_basis(SolverPtr solver, int hole_index) {
  if (hole_index < 1 || hole_index > solver->domain().hole_count()) {
    throw Error(ErrorCode::InvalidArgument, "hole index out of range");
  }
  return harmonic_measure_field(std::move(solver), BoundaryArc::whole_component(hole_index));
}

namespace {

bool arcs_overlap(const BoundaryArc& a, const BoundaryArc& b) {
  if (a.component != b.component) return false;
  if (a.whole || b.whole) return true;
  double a0 = wrap_angle(a.t0), a1 = a0 + wrap_angle(a.t1 - a.t0);
  double b0 = wrap_angle(b.t0), b1 = b0 + wrap_angle(b.t1 - b.t0);
  for (int m = -1; m <= 1; ++m) {
    double s0 = b0 + kTwoPi * m, s1 = b1 + kTwoPi * m;
    if (std::max(a0, s0) < std::min(a1, s1)) return true;
  }
  return false;
}

}  // namespace

double excursion_measure(SolverPtr solver, const BoundaryArc& v, const BoundaryArc& vprime) {
  if (arcs_overlap(v, vprime)) {
    throw Error(ErrorCode::ArcsNotDisjoint, "excursion measure requires disjoint arcs");
  }
  // Integrate d(hm of V')/dn over V. When both arcs are whole components,
  // symmetry lets us differentiate on the side with the larger feature scale.
  BoundaryArc deriv_side = v, data_side = vprime;
  if (v.whole && vprime.whole) {
    double fv = component_feature_scale(*solver, v.component);
    double fw = component_feature_scale(*solver, vprime.component);
    if (fw > fv) std::swap(deriv_side, data_side);
  }
  HarmonicSolution u = harmonic_measure_field(solver, data_side);

  const auto& cn = solver->component(deriv_side.component);
  auto integrand = [&](double t) {
    double bv = u.boundary_trace(deriv_side.component, t);
    return boundary_normal_derivative(u, solver, {deriv_side.component, t}, bv) *
           solver->domain().component(deriv_side.component).speed(t);
  };
  if (deriv_side.whole) {
    // Periodic trapezoid at the component nodes.
    double acc = 0;
    for (int j = 0; j < cn.node_count; ++j) acc += integrand(cn.t[static_cast<size_t>(j)]);
    return acc * cn.h;
  }
  // Gauss-Legendre panels over the arc.
  double t0 = wrap_angle(deriv_side.t0);
  double t1 = t0 + wrap_angle(deriv_side.t1 - deriv_side.t0);
  const int panels = std::max(8, static_cast<int>((t1 - t0) / cn.h / 2));
  const GaussRule& rule = gauss_legendre(12);
  double acc = 0;
  for (int p = 0; p < panels; ++p) {
    double a = t0 + (t1 - t0) * p / panels;
    double b = t0 + (t1 - t0) * (p + 1) / panels;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      acc += rule.weights[q] * integrand(mid + half * rule.nodes[q]) * half;
    }
  }
  return acc;
}

}  // namespace erbm
