#pragma once

#include <memory>
#include <optional>

#include "erbm/dirichlet.hpp"
#include "erbm/green.hpp"

namespace erbm {

/// A point on the boundary addressed by (component, parameter).
struct BoundaryPoint {
  int component = 0;
  double t = 0;
};

/// An arc on one boundary component, or the whole component.
struct BoundaryArc {
  int component = 0;
  double t0 = 0;  // arc runs ccw from t0 to t1 (t1 may exceed 2pi to wrap)
  double t1 = 0;
  bool whole = false;

  static BoundaryArc whole_component(int comp) { return {comp, 0, kTwoPi, true}; }
  static BoundaryArc arc(int comp, double t0, double t1) { return {comp, t0, t1, false}; }
};

/// Flux of a harmonic field through a closed curve, with the normal pointing
/// away from the region the curve encloses: sum of grad(field).n_away * speed
/// over the parameter circle (periodic trapezoid; spectrally accurate).
double flux(const HarmonicField& field, const SmoothClosedCurve& curve, int quad_nodes = 0);

/// Same with a guard that the curve stays strictly inside the domain.
double flux(const HarmonicField& field, const Domain& domain, const SmoothClosedCurve& curve,
            int quad_nodes = 0);

/// The Poisson-kernel field H_D(. , w0) for a boundary point w0: an exact
/// strength-(1/pi) dipole at w0 minus a solved smooth correction. Positive in
/// the domain, vanishing on the boundary away from w0, with the half-plane
/// kernel asymptotics at w0.
class PoissonKernelField final : public BoundaryField {
 public:
  PoissonKernelField(SolverPtr solver, BoundaryPoint w0);

  double value(Point z) const override;
  Point gradient(Point z) const override;
  double boundary_trace(int comp, double t) const override;

  BoundaryPoint at() const { return w0_; }
  Point boundary_location() const { return w_; }
  Point inward_normal() const { return nu_; }
  /// The dipole part alone (exact); used for the singular split.
  double dipole_value(Point z) const;
  const HarmonicSolution& correction() const { return *correction_; }
  SolverPtr solver_ptr() const { return solver_; }

 private:
  SolverPtr solver_;
  BoundaryPoint w0_;
  Point w_;
  Point nu_;  // normal at w0 pointing into the domain
  std::shared_ptr<const HarmonicSolution> correction_;
};

/// Pointwise Poisson kernel (density of harmonic measure per unit arclength).
double poisson_kernel(SolverPtr solver, Point z, BoundaryPoint w);

/// Exit density of Brownian motion from z at all collocation nodes,
/// via one transposed solve: values[comp][j] = H_D(z, w_j).
std::vector<std::vector<double>> exit_density(SolverPtr solver, Point z);

/// Boundary Poisson kernel H_{dD}(w, z) = (1/2) d^2 G / dn_w dn_z for
/// boundary points on distinct components or separated by arclength > 1e-3.
double boundary_poisson_kernel(SolverPtr solver, BoundaryPoint w, BoundaryPoint z);

/// Harmonic measure of an arc or whole component from z. Arc indicators are
/// mollified over two quadrature nodes (erf profile), which keeps the solves
/// spectrally accurate and is exactly additive across shared endpoints.
double harmonic_measure(SolverPtr solver, Point z, const BoundaryArc& arc);

/// The solved harmonic-measure field itself (1 on the arc, 0 elsewhere).
HarmonicSolution harmonic_measure_field(SolverPtr solver, const BoundaryArc& arc);

/// Node samples of the mollified arc indicator (helper shared with the ER
/// module).
std::vector<std::vector<double>> arc_indicator_data(SolverPtr solver, const BoundaryArc& arc);

/// Excursion measure E_D(V, V') = double boundary integral of the boundary
/// Poisson kernel; computed as the integral over V of the inward-normal
/// derivative of the harmonic-measure field of V'.
double excursion_measure(SolverPtr solver, const BoundaryArc& v, const BoundaryArc& vprime);

/// Harmonic-measure basis: omega_i = 1 on hole i, 0 on the other components.
HarmonicSolution h_basis(SolverPtr solver, int hole_index);

/// Inward-normal derivative of a solved field at a boundary point, by a
/// one-sided interior stencil scaled to the local feature size.
double boundary_normal_derivative(const HarmonicField& field, SolverPtr solver,
                                  BoundaryPoint at, double boundary_value);

/// Local feature scale of a component: min of curvature radius and clearance.
double component_feature_scale(const NystromSolver& solver, int comp);

}  // namespace erbm
