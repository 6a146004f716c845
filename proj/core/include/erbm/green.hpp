#pragma once

#include <memory>

#include "erbm/dirichlet.hpp"

namespace erbm {

/// Green's function of Brownian motion scaled as an occupation density:
/// G(w) = -(1/pi) ln|w - pole| + corrector(w), positive in the domain with
/// zero boundary trace.
class GreenField final : public BoundaryField {
 public:
  GreenField(SolverPtr solver, Point pole);

  double value(Point w) const override;
  Point gradient(Point w) const override;
  double boundary_trace(int comp, double t) const override;

  Point pole() const { return pole_; }
  const HarmonicSolution& corrector() const { return *corrector_; }
  SolverPtr solver_ptr() const { return solver_; }

 private:
  SolverPtr solver_;
  Point pole_;
  std::shared_ptr<const HarmonicSolution> corrector_;
};

/// Throws PoleTooCloseToBoundary when the pole is within 1e-4 * diameter of
/// the boundary (or outside the domain).
GreenField greens_function(SolverPtr solver, Point pole);

}  // namespace erbm
