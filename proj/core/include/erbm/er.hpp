#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <variant>

#include "erbm/kernels.hpp"
#include "erbm/trig.hpp"

namespace erbm {

/// Period (flux) matrix P[j][i] = flux(omega_i, eta_j) with the normal
/// pointing away from the encircled hole. Symmetric with strictly negative
/// eigenvalues on valid domains.
struct PeriodMatrix {
  Eigen::MatrixXd matrix;
  double collar_factor = 0;
  double symmetry_residual = 0;     // ||P - P^T|| / ||P||
  Eigen::VectorXd eigenvalues;      // of the symmetrized matrix, ascending
  double condition = 1;
};

/// Shared ER state for one (domain, resolution, collar factor): the harmonic
/// measure basis omega_1..omega_n, the collar curves, and the factored period
/// matrix. The basis solves are independent; everything is immutable after
/// construction.
class ErWorkspace {
 public:
  ErWorkspace(SolverPtr solver, double collar_factor = 0.5);

  SolverPtr solver() const { return solver_; }
  const Domain& domain() const { return solver_->domain(); }
  int hole_count() const { return domain().hole_count(); }
  double collar_factor() const { return collar_factor_; }

  const HarmonicSolution& omega(int i) const;  // 1-based
  std::shared_ptr<const HarmonicSolution> omega_ptr(int i) const;
  const CollarCurve& collar(int i) const;
  const PeriodMatrix& period() const { return period_; }

  /// Fluxes of a field through every collar.
  Eigen::VectorXd flux_vector(const HarmonicField& field) const;
  /// Solves P c = rhs; throws IllConditioned when cond(P) > 1e10.
  Eigen::VectorXd solve_constants(const Eigen::VectorXd& rhs) const;

 private:
  SolverPtr solver_;
  double collar_factor_;
  std::vector<std::shared_ptr<const HarmonicSolution>> omega_;
  std::vector<CollarCurve> collars_;
  PeriodMatrix period_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

using ErWorkspacePtr = std::shared_ptr<const ErWorkspace>;

ErWorkspacePtr make_er_workspace(SolverPtr solver, double collar_factor = 0.5);

/// Computes the period matrix alone (n = 0 gives an empty matrix).
PeriodMatrix period_matrix(SolverPtr solver, double collar_factor = 0.5);

/// ER-harmonic combination base + sum_i c_i omega_i. For ER Green fields the
/// base carries the logarithmic source. The base vanishes on the holes in all
/// constructions here, so component_value(i) = c_i.
class ErField final : public BoundaryField {
 public:
  enum class Source { None, Boundary, InteriorPole, Hole };

  ErField(ErWorkspacePtr ws, std::shared_ptr<const BoundaryField> base, Eigen::VectorXd c,
          Source source = Source::None);

  double value(Point z) const override;
  Point gradient(Point z) const override;
  double boundary_trace(int comp, double t) const override;

  /// Constant value on hole i (1-based).
  double component_value(int i) const { return c_(i - 1); }
  const Eigen::VectorXd& constants() const { return c_; }
  const ErWorkspace& workspace() const { return *ws_; }
  ErWorkspacePtr workspace_ptr() const { return ws_; }
  const BoundaryField* base() const { return base_.get(); }
  Source source() const { return source_; }
  /// Condition estimate of the period solve behind the constants.
  double condition() const { return ws_->period().condition; }

  /// Range of the generating boundary data on the outer component, when the
  /// field came from solve_er_harmonic (used by max-principle checks).
  std::optional<std::pair<double, double>> data_range() const { return data_range_; }
  void set_data_range(double lo, double hi) { data_range_ = {lo, hi}; }

 private:
  ErWorkspacePtr ws_;
  std::shared_ptr<const BoundaryField> base_;
  Eigen::VectorXd c_;
  Source source_;
  std::optional<std::pair<double, double>> data_range_;
};

/// ER-harmonic solution with prescribed data on the outer boundary: harmonic
/// part with 0 hole data, constants from P c = -flux(u0, eta).
ErField solve_er_harmonic(ErWorkspacePtr ws, const std::function<double(double)>& outer_data);
ErField solve_er_harmonic(ErWorkspacePtr ws, const std::vector<double>& outer_node_data);

/// ER Poisson kernel H^{ER}(. , w) for w on the outer component.
ErField er_poisson_kernel(ErWorkspacePtr ws, double t_w);

/// ER Green's function with interior pole z: (1/pi) log(1/|.-z|) + corrector
/// + sum c_i omega_i; zero trace on the outer boundary, zero flux around
/// every hole, source flux -2.
ErField er_green(ErWorkspacePtr ws, Point pole);

/// ER Green's function G^{ER}(A_i, .): pure omega combination with flux -2
/// around hole i and 0 around the others.
ErField er_green_component(ErWorkspacePtr ws, int hole_index);

/// Restart density on the collar eta_i: the normalized inward-normal
/// derivative on eta_i of the harmonic measure of the hole side in the
/// annular region U_i, with an inverse-CDF sampler over arclength.
class RestartDensity {
 public:
  RestartDensity(SolverPtr domain_solver, int hole_index, double collar_factor);

  int hole_index() const { return hole_index_; }
  const CollarCurve& collar() const { return collar_; }
  /// Density per unit arclength at collar parameter t.
  double value(double t) const { return density_.eval(t); }
  double total_mass() const { return 1.0; }  // normalized by construction
  /// Inverse-CDF sample of the collar parameter from u in [0,1).
  double sample_parameter(double u) const;
  Point sample_point(double u) const { return collar_.curve.point(sample_parameter(u)); }
  /// Raw (pre-normalization) total mass; equals the excursion measure
  /// E_{U_i}(A_i, eta_i).
  double excursion_norm() const { return excursion_norm_; }

 private:
  int hole_index_;
  CollarCurve collar_;
  TrigSeries density_;
  double excursion_norm_ = 0;
  std::vector<double> cdf_t_;
  std::vector<double> cdf_u_;
};

RestartDensity restart_density(SolverPtr solver, int hole_index, double collar_factor = 0.5);

/// Component-hit Markov chain of the ER process. Row i (1-based hole) of q
/// gives the distribution of the next boundary component hit after a restart
/// from hole i; column 0 is the absorbing outer state. p_tilde conditions on
/// leaving the current hole and is collar-independent.
struct BoundaryChain {
  Eigen::MatrixXd q;        // n x (n+1), columns: 0 = outer, 1..n = holes
  Eigen::MatrixXd p_tilde;  // same layout, zero diagonal on hole columns
  double collar_factor = 0;
  double hole_block_spectral_radius = 0;  // of p_tilde's hole-to-hole block
};

BoundaryChain boundary_chain(ErWorkspacePtr ws);

/// Start of an ER path: an interior point or a hole index (1-based).
using ErStart = std::variant<Point, int>;

/// ER harmonic measure of an arc of the outer boundary seen from an interior
/// point or from a hole. Arc indicators are mollified over two nodes.
double er_harmonic_measure(ErWorkspacePtr ws, const ErStart& start, const BoundaryArc& arc);

/// The solved ER field for the arc indicator (1 on the arc, ER elsewhere).
ErField er_harmonic_measure_field(ErWorkspacePtr ws, const BoundaryArc& arc);

}  // namespace erbm
