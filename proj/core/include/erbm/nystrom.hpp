#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <vector>

#include "erbm/domain.hpp"
#include "erbm/trig.hpp"

namespace erbm {

/// Sampled geometry of one boundary component at its collocation nodes.
struct ComponentNodes {
  int node_count = 0;
  double h = 0;       // 2pi / node_count
  double sigma = 1;   // +1 outer, -1 holes: sign putting the into-domain
                      // normal in front of the complex double-layer kernel
  std::vector<double> t;
  std::vector<Point> w;       // gamma(t)
  std::vector<Point> wp;      // gamma'(t)
  std::vector<Point> wpp;     // gamma''(t)
  std::vector<double> speed;  // |gamma'|
  double avg_speed = 0;       // length / 2pi
};

/// Density solved by the boundary-integral system: one double-layer density
/// value per node plus one log-source strength per hole.
struct Density {
  std::vector<std::vector<double>> mu;  // per component
  std::vector<double> log_strength;     // per hole
};

/// Second-kind Nystrom discretization of the interior Dirichlet problem on a
/// multiply connected domain: double-layer representation with the trapezoid
/// rule on each component, plus one log source per hole (strengths pinned by
/// zero-mean constraints on the hole densities) to remove the double layer's
/// rank deficiency.
class NystromSolver {
 public:
  NystromSolver(const Domain& domain, int node_count = 0);

  const Domain& domain() const { return domain_; }
  int component_count() const { return static_cast<int>(comps_.size()); }
  const ComponentNodes& component(int c) const { return comps_[static_cast<size_t>(c)]; }
  int total_nodes() const { return total_nodes_; }
  Point hole_center(int k) const { return hole_centers_[static_cast<size_t>(k)]; }
  double condition_estimate() const { return cond_estimate_; }
  double scale() const { return domain_.diameter(); }

  /// Solves with Dirichlet data sampled at the collocation nodes
  /// (rhs[c][j] = data on component c at node j).
  Density solve(const std::vector<std::vector<double>>& rhs) const;

  /// Solves the transposed system; used to read off the discrete Poisson
  /// kernel (exit density) against the quadrature weights.
  Eigen::VectorXd transpose_solve(const Eigen::VectorXd& rhs) const;

  /// Node index of (component, node) in the stacked unknown vector.
  int index(int comp, int node) const { return offsets_[static_cast<size_t>(comp)] + node; }

  struct Nearest {
    double distance;
    double t;
    double speed;  // |gamma'(t)| at the nearest parameter
  };
  /// Nearest boundary point on one component (coarse scan over the stored
  /// nodes plus Newton refinement).
  Nearest nearest_point(int comp, Point z) const;

  /// Local feature size of a component: min of curvature radius and the
  /// clearance to the other components (precomputed).
  double feature_scale(int comp) const { return feature_scale_[static_cast<size_t>(comp)]; }

  /// Fine uniform resampling of a component's geometry, cached per size.
  struct FineGeometry {
    int m = 0;
    std::vector<Point> w;
    std::vector<Point> wp;  // gamma' at the fine nodes
  };
  const FineGeometry& fine_geometry(int comp, int m) const;

 private:
  void assemble();

  Domain domain_;
  std::vector<ComponentNodes> comps_;
  std::vector<int> offsets_;
  std::vector<Point> hole_centers_;
  std::vector<double> feature_scale_;
  int total_nodes_ = 0;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_transpose_;
  double cond_estimate_ = 0;

  mutable std::mutex fine_mutex_;
  mutable std::vector<std::vector<std::shared_ptr<const FineGeometry>>> fine_cache_;
};

using SolverPtr = std::shared_ptr<const NystromSolver>;

/// Cached solver per (domain value, node count); domains are value types so
/// callers pass the same Domain object to share.
SolverPtr make_solver(const Domain& domain, int node_count = 0);

}  // namespace erbm
