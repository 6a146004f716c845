#include "erbm/green.hpp"

#include <cmath>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"

namespace erbm {

GreenField::GreenField(SolverPtr solver, Point pole) : solver_(std::move(solver)), pole_(pole) {
  // Corrector carries boundary data +(1/pi) ln|w - pole| so the sum vanishes
  // on every component.
  auto data = [this](int, double, Point w) { return std::log(std::abs(w - pole_)) / kPi; };
  corrector_ = std::make_shared<HarmonicSolution>(solve_dirichlet(solver_, data));
}

double GreenField::value(Point w) const {
  return -std::log(std::abs(w - pole_)) / kPi + corrector_->value(w);
}

Point GreenField::gradient(Point w) const {
  Point d = w - pole_;
  return -d / (kPi * norm2(d)) + corrector_->gradient(w);
}

double GreenField::boundary_trace(int comp, double t) const {
  Point w = solver_->domain().component(comp).point(t);
  return -std::log(std::abs(w - pole_)) / kPi + corrector_->boundary_trace(comp, t);
}

GreenField greens_function(SolverPtr solver, Point pole) {
  const auto& domain = solver->domain();
  if (!domain.contains(pole)) {
    throw Error(ErrorCode::PoleTooCloseToBoundary, "pole lies outside the domain");
  }
  double dist = domain.closest_boundary(pole).distance;
  if (dist <= kPoleBoundaryMinFactor * domain.diameter()) {
    throw Error(ErrorCode::PoleTooCloseToBoundary,
                "pole within 1e-4 * diameter of the boundary");
  }
  return GreenField(std::move(solver), pole);
}

}  // namespace erbm
