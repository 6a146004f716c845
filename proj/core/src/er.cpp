#include "erbm/er.hpp"

#include <algorithm>
#include <cmath>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"

namespace erbm {

ErWorkspace::ErWorkspace(SolverPtr solver, double collar_factor)
    : solver_(std::move(solver)), collar_factor_(collar_factor) {
  const int n = solver_->domain().hole_count();
  omega_.reserve(static_cast<size_t>(n));
  collars_.reserve(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    omega_.push_back(std::make_shared<HarmonicSolution>(h_basis(solver_, i)));
    collars_.push_back(collar_curve(solver_->domain(), i, collar_factor_));
  }

  period_.collar_factor = collar_factor_;
  period_.matrix.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      period_.matrix(j, i) = flux(*omega_[static_cast<size_t>(i)],
                                  collars_[static_cast<size_t>(j)].curve);
    }
  }
  if (n > 0) {
    double nrm = period_.matrix.norm();
    period_.symmetry_residual =
        nrm > 0 ? (period_.matrix - period_.matrix.transpose()).norm() / nrm : 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (period_.matrix + period_.matrix.transpose()));
    period_.eigenvalues = es.eigenvalues();
    double lo = period_.eigenvalues.cwiseAbs().minCoeff();
    double hi = period_.eigenvalues.cwiseAbs().maxCoeff();
    period_.condition = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    lu_.compute(period_.matrix);
    if (!(period_.condition < kIllConditioned)) {
      throw Error(ErrorCode::IllConditioned,
                  "period matrix condition " + std::to_string(period_.condition));
    }
  } else {
    period_.eigenvalues.resize(0);
    period_.condition = 1;
  }
}

const HarmonicSolution& ErWorkspace::omega(int i) const {
  return *omega_.at(static_cast<size_t>(i - 1));
}

std::shared_ptr<const HarmonicSolution> ErWorkspace::omega_ptr(int i) const {
  return omega_.at(static_cast<size_t>(i - 1));
}

const CollarCurve& ErWorkspace::collar(int i) const {
  return collars_.at(static_cast<size_t>(i - 1));
}

Eigen::VectorXd ErWorkspace::flux_vector(const HarmonicField& field) const {
  Eigen::VectorXd b(hole_count());
  for (int j = 1; j <= hole_count(); ++j) {
    b(j - 1) = flux(field, collar(j).curve);
  }
  return b;
}

Eigen::VectorXd ErWorkspace::solve_constants(const Eigen::VectorXd& rhs) const {
  if (hole_count() == 0) return Eigen::VectorXd();
  return lu_.solve(rhs);
}

ErWorkspacePtr make_er_workspace(SolverPtr solver, double collar_factor) {
  return std::make_shared<ErWorkspace>(std::move(solver), collar_factor);
}

PeriodMatrix period_matrix(SolverPtr solver, double collar_factor) {
  return ErWorkspace(std::move(solver), collar_factor).period();
}

ErField::ErField(ErWorkspacePtr ws, std::shared_ptr<const BoundaryField> base, Eigen::VectorXd c,
                 Source source)
    : ws_(std::move(ws)), base_(std::move(base)), c_(std::move(c)), source_(source) {}

double ErField::value(Point z) const {
  double v = base_ ? base_->value(z) : 0.0;
  for (int i = 1; i <= ws_->hole_count(); ++i) v += c_(i - 1) * ws_->omega(i).value(z);
  return v;
}

Point ErField::gradient(Point z) const {
  Point g = base_ ? base_->gradient(z) : Point(0, 0);
  for (int i = 1; i <= ws_->hole_count(); ++i) g += c_(i - 1) * ws_->omega(i).gradient(z);
  return g;
}

double ErField::boundary_trace(int comp, double t) const {
  double v = base_ ? base_->boundary_trace(comp, t) : 0.0;
  for (int i = 1; i <= ws_->hole_count(); ++i) v += c_(i - 1) * ws_->omega(i).boundary_trace(comp, t);
  return v;
}

namespace {

// `flux_part` is the piece of `base` whose collar fluxes equal the fluxes of
// `base` around the holes alone. Point singularities of the base (a Green
// pole inside a collar, a boundary dipole) contribute nothing to hole-only
// fluxes, so passing the smooth corrector avoids both the winding bookkeeping
// and near-singular quadrature.
ErField er_from_base(ErWorkspacePtr ws, std::shared_ptr<const BoundaryField> base,
                     const HarmonicField& flux_part, double flux_sign,
                     ErField::Source source) {
  Eigen::VectorXd b = flux_sign * ws->flux_vector(flux_part);
  Eigen::VectorXd c = ws->solve_constants(-b);
  return ErField(std::move(ws), std::move(base), std::move(c), source);
}

}  // namespace

ErField solve_er_harmonic(ErWorkspacePtr ws, const std::vector<double>& outer_node_data) {
  auto solver = ws->solver();
  const auto& outer = solver->component(0);
  if (static_cast<int>(outer_node_data.size()) != outer.node_count) {
    throw Error(ErrorCode::InvalidArgument, "outer data size mismatch");
  }
  std::vector<std::vector<double>> data(static_cast<size_t>(solver->component_count()));
  data[0] = outer_node_data;
  for (int c = 1; c < solver->component_count(); ++c) {
    data[static_cast<size_t>(c)].assign(
        static_cast<size_t>(solver->component(c).node_count), 0.0);
  }
  auto base = std::make_shared<HarmonicSolution>(solve_dirichlet(solver, std::move(data)));
  double lo = *std::min_element(outer_node_data.begin(), outer_node_data.end());
  double hi = *std::max_element(outer_node_data.begin(), outer_node_data.end());
  const HarmonicField& flux_part = *base;
  ErField f = er_from_base(std::move(ws), base, flux_part, 1.0, ErField::Source::None);
  f.set_data_range(lo, hi);
  return f;
}

ErField solve_er_harmonic(ErWorkspacePtr ws, const std::function<double(double)>& outer_data) {
  const auto& outer = ws->solver()->component(0);
  std::vector<double> samples(static_cast<size_t>(outer.node_count));
  for (int j = 0; j < outer.node_count; ++j) {
    samples[static_cast<size_t>(j)] = outer_data(outer.t[static_cast<size_t>(j)]);
  }
  return solve_er_harmonic(std::move(ws), samples);
}

ErField er_poisson_kernel(ErWorkspacePtr ws, double t_w) {
  auto base = std::make_shared<PoissonKernelField>(ws->solver(), BoundaryPoint{0, t_w});
  // The dipole at w contributes no flux around holes; use the correction solve.
  const HarmonicField& flux_part = base->correction();
  return er_from_base(std::move(ws), base, flux_part, -1.0, ErField::Source::Boundary);
}

ErField er_green(ErWorkspacePtr ws, Point pole) {
  auto base = std::make_shared<GreenField>(greens_function(ws->solver(), pole));
  // The log source is flux-free around hole-only loops even when the pole
  // sits inside a collar; only the corrector carries hole flux.
  const HarmonicField& flux_part = base->corrector();
  return er_from_base(std::move(ws), base, flux_part, 1.0, ErField::Source::InteriorPole);
}

ErField er_green_component(ErWorkspacePtr ws, int hole_index) {
  if (hole_index < 1 || hole_index > ws->hole_count()) {
    throw Error(ErrorCode::InvalidArgument, "hole index out of range");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ws->hole_count());
  rhs(hole_index - 1) = -2.0;
  Eigen::VectorXd c = ws->solve_constants(rhs);
  return ErField(std::move(ws), nullptr, std::move(c), ErField::Source::Hole);
}

RestartDensity::RestartDensity(SolverPtr domain_solver, int hole_index, double collar_factor)
    : hole_index_(hole_index),
      collar_(collar_curve(domain_solver->domain(), hole_index, collar_factor)) {
  // Annular region U_i between the hole and the collar, with the collar as
  // outer boundary.
  const auto& hole = domain_solver->domain().component(hole_index);
  Domain u_region(collar_.curve, {hole});
  auto u_solver = make_solver(u_region);
  auto omega = solve_dirichlet(
      u_solver, [](int comp, double, Point) { return comp == 1 ? 1.0 : 0.0; });

  const auto& cn = u_solver->component(0);
  std::vector<double> raw(static_cast<size_t>(cn.node_count));
  for (int j = 0; j < cn.node_count; ++j) {
    double t = cn.t[static_cast<size_t>(j)];
    raw[static_cast<size_t>(j)] =
        boundary_normal_derivative(omega, u_solver, {0, t}, 0.0);
  }
  // Normalize to unit mass over eta_i; the raw mass is E_{U_i}(A_i, eta_i).
  double mass = 0;
  for (int j = 0; j < cn.node_count; ++j) {
    mass += raw[static_cast<size_t>(j)] * cn.speed[static_cast<size_t>(j)] * cn.h;
  }
  excursion_norm_ = mass;
  if (!(mass > 0)) {
    throw Error(ErrorCode::SolverSingular, "restart density has non-positive mass");
  }
  for (auto& v : raw) v /= mass;
  density_ = TrigSeries::fit(raw);

  // Inverse-CDF table over arclength (linear interpolation when sampling).
  const int m = kRestartCdfTableSize;
  cdf_t_.resize(static_cast<size_t>(m + 1));
  cdf_u_.resize(static_cast<size_t>(m + 1));
  double acc = 0;
  cdf_t_[0] = 0;
  cdf_u_[0] = 0;
  double prev = density_.eval(0) * collar_.curve.speed(0);
  for (int j = 1; j <= m; ++j) {
    double t = kTwoPi * j / m;
    double cur = density_.eval(t) * collar_.curve.speed(t);
    acc += 0.5 * (prev + cur) * (kTwoPi / m);
    prev = cur;
    cdf_t_[static_cast<size_t>(j)] = t;
    cdf_u_[static_cast<size_t>(j)] = acc;
  }
  // Rescale the table so it ends exactly at 1.
  double total = cdf_u_.back();
  for (auto& u : cdf_u_) u /= total;
}

double RestartDensity::sample_parameter(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  auto it = std::lower_bound(cdf_u_.begin(), cdf_u_.end(), u);
  if (it == cdf_u_.begin()) return cdf_t_.front();
  size_t hi = static_cast<size_t>(it - cdf_u_.begin());
  size_t lo = hi - 1;
  double du = cdf_u_[hi] - cdf_u_[lo];
  double w = du > 0 ? (u - cdf_u_[lo]) / du : 0.0;
  return cdf_t_[lo] + w * (cdf_t_[hi] - cdf_t_[lo]);
}

RestartDensity restart_density(SolverPtr solver, int hole_index, double collar_factor) {
  if (hole_index < 1 || hole_index > solver->domain().hole_count()) {
    throw Error(ErrorCode::InvalidArgument, "hole index out of range");
  }
  return RestartDensity(std::move(solver), hole_index, collar_factor);
}

BoundaryChain boundary_chain(ErWorkspacePtr ws) {
  const int n = ws->hole_count();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "boundary chain needs at least one hole");
  BoundaryChain chain;
  chain.collar_factor = ws->collar_factor();
  chain.q.setZero(n, n + 1);
  chain.p_tilde.setZero(n, n + 1);

  for (int i = 1; i <= n; ++i) {
    RestartDensity rho(ws->solver(), i, ws->collar_factor());
    const auto& collar = rho.collar().curve;
    const int m = std::max(256, collar.node_count());
    // q[i][k] = int rho(z) hm(z, component k) ds over the collar. The outer
    // column is the complement, so each row sums to one exactly.
    for (int j = 0; j < m; ++j) {
      double t = kTwoPi * j / m;
      Point z = collar.point(t);
      double w = rho.value(t) * collar.speed(t) * (kTwoPi / m);
      double sum_holes = 0;
      for (int k = 1; k <= n; ++k) {
        double om = ws->omega(k).value(z);
        chain.q(i - 1, k) += w * om;
        sum_holes += om;
      }
      chain.q(i - 1, 0) += w * (1.0 - sum_holes);
    }
    double row = chain.q.row(i - 1).sum();
    chain.q.row(i - 1) /= row;  // remove residual quadrature drift
  }

  for (int i = 0; i < n; ++i) {
    double stay = chain.q(i, i + 1);
    double leave = 1.0 - stay;
    for (int k = 0; k <= n; ++k) {
      if (k == i + 1) continue;
      chain.p_tilde(i, k) = chain.q(i, k) / leave;
    }
  }

  if (n >= 1) {
    Eigen::MatrixXd hole_block(n, n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) hole_block(i, k) = chain.p_tilde(i, k + 1);
    }
    chain.hole_block_spectral_radius =
        hole_block.eigenvalues().cwiseAbs().maxCoeff();
  }
  return chain;
}

ErField er_harmonic_measure_field(ErWorkspacePtr ws, const BoundaryArc& arc) {
  if (arc.component != 0) {
    throw Error(ErrorCode::InvalidArgument, "ER harmonic measure arcs live on the outer boundary");
  }
  auto data = arc_indicator_data(ws->solver(), arc);
  return solve_er_harmonic(std::move(ws), data[0]);
}

double er_harmonic_measure(ErWorkspacePtr ws, const ErStart& start, const BoundaryArc& arc) {
  ErField f = er_harmonic_measure_field(ws, arc);
  if (std::holds_alternative<Point>(start)) {
    Point z = std::get<Point>(start);
    if (!f.workspace().domain().contains(z)) {
      throw Error(ErrorCode::InvalidArgument, "start point not inside the domain");
    }
    return f.value(z);
  }
  return f.component_value(std::get<int>(start));
}

}  // namespace erbm
