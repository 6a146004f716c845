#include "erbm/nystrom.hpp"

#include <cmath>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"

namespace erbm {

NystromSolver::NystromSolver(const Domain& domain, int node_count) : domain_(domain) {
  domain_.require_valid();
  const int ncomp = domain_.component_count();
  comps_.resize(static_cast<size_t>(ncomp));
  offsets_.resize(static_cast<size_t>(ncomp));
  for (int c = 0; c < ncomp; ++c) {
    const auto& curve = domain_.component(c);
    ComponentNodes& cn = comps_[static_cast<size_t>(c)];
    cn.node_count = node_count > 0 ? node_count : curve.node_count();
    cn.h = kTwoPi / cn.node_count;
    cn.sigma = (c == 0) ? 1.0 : -1.0;
    cn.t.resize(static_cast<size_t>(cn.node_count));
    cn.w.resize(static_cast<size_t>(cn.node_count));
    cn.wp.resize(static_cast<size_t>(cn.node_count));
    cn.wpp.resize(static_cast<size_t>(cn.node_count));
    cn.speed.resize(static_cast<size_t>(cn.node_count));
    double len = 0;
    for (int j = 0; j < cn.node_count; ++j) {
      double t = cn.h * j;
      cn.t[static_cast<size_t>(j)] = t;
      cn.w[static_cast<size_t>(j)] = curve.point(t);
      cn.wp[static_cast<size_t>(j)] = curve.derivative(t);
      cn.wpp[static_cast<size_t>(j)] = curve.second_derivative(t);
      cn.speed[static_cast<size_t>(j)] = std::abs(cn.wp[static_cast<size_t>(j)]);
      len += cn.speed[static_cast<size_t>(j)] * cn.h;
    }
    cn.avg_speed = len / kTwoPi;
    offsets_[static_cast<size_t>(c)] = total_nodes_;
    total_nodes_ += cn.node_count;
  }
  for (int k = 1; k <= domain_.hole_count(); ++k) {
    hole_centers_.push_back(domain_.component(k).center());
  }
  feature_scale_.resize(static_cast<size_t>(ncomp));
  for (int c = 0; c < ncomp; ++c) {
    const auto& cn = comps_[static_cast<size_t>(c)];
    double min_radius = domain_.diameter();
    for (int j = 0; j < cn.node_count; ++j) {
      double sp = cn.speed[static_cast<size_t>(j)];
      double curv =
          std::abs(cross(cn.wp[static_cast<size_t>(j)], cn.wpp[static_cast<size_t>(j)])) /
          (sp * sp * sp);
      if (curv > 1e-14) min_radius = std::min(min_radius, 1.0 / curv);
    }
    double feature = min_radius;
    if (ncomp > 1) {
      for (int other = 0; other < ncomp; ++other) {
        if (other == c) continue;
        feature = std::min(feature,
                           curve_distance(domain_.component(c), domain_.component(other)));
      }
    }
    feature_scale_[static_cast<size_t>(c)] = feature;
  }
  fine_cache_.assign(static_cast<size_t>(ncomp), {});
  assemble();
}

void NystromSolver::assemble() {
  const int n_holes = domain_.hole_count();
  const int dim = total_nodes_ + n_holes;
  matrix_.setZero(dim, dim);

  for (int cp = 0; cp < component_count(); ++cp) {
    const auto& P = comps_[static_cast<size_t>(cp)];
    for (int jp = 0; jp < P.node_count; ++jp) {
      const int row = index(cp, jp);
      const Point zp = P.w[static_cast<size_t>(jp)];
      for (int cq = 0; cq < component_count(); ++cq) {
        const auto& Q = comps_[static_cast<size_t>(cq)];
        const double factor = Q.sigma * Q.h / kTwoPi;
        for (int jq = 0; jq < Q.node_count; ++jq) {
          const int col = index(cq, jq);
          double kernel;
          if (cq == cp && jq == jp) {
            // Diagonal limit of Im[w'(s)/(w(s)-w(t))] as s -> t.
            kernel = (Q.wpp[static_cast<size_t>(jq)] / (2.0 * Q.wp[static_cast<size_t>(jq)])).imag();
          } else {
            kernel = (Q.wp[static_cast<size_t>(jq)] / (Q.w[static_cast<size_t>(jq)] - zp)).imag();
          }
          matrix_(row, col) = factor * kernel;
        }
      }
      matrix_(row, row) += 0.5;  // jump term, boundary limit taken from inside D
      for (int k = 0; k < n_holes; ++k) {
        matrix_(row, total_nodes_ + k) =
            std::log(std::abs(zp - hole_centers_[static_cast<size_t>(k)]));
      }
    }
  }
  // Zero-mean constraints on each hole density close the system.
  for (int k = 0; k < n_holes; ++k) {
    const auto& Q = comps_[static_cast<size_t>(k + 1)];
    for (int jq = 0; jq < Q.node_count; ++jq) {
      matrix_(total_nodes_ + k, index(k + 1, jq)) = Q.speed[static_cast<size_t>(jq)] * Q.h;
    }
  }

  lu_.compute(matrix_);
  lu_transpose_.compute(matrix_.transpose());

  // Hager-style 1-norm condition estimate.
  const double norm1 = matrix_.cwiseAbs().colwise().sum().maxCoeff();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(dim, 1.0 / dim);
  double inv_norm = 0;
  for (int it = 0; it < 5; ++it) {
    Eigen::VectorXd y = lu_.solve(x);
    inv_norm = y.lpNorm<1>();
    Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0 ? 1.0 : -1.0; });
    Eigen::VectorXd zv = lu_transpose_.solve(xi);
    int best;
    zv.cwiseAbs().maxCoeff(&best);
    if (zv.cwiseAbs().maxCoeff() <= zv.dot(x)) break;
    x.setZero();
    x(best) = 1.0;
  }
  cond_estimate_ = norm1 * inv_norm;
  if (!std::isfinite(cond_estimate_) || cond_estimate_ > 1e14) {
    throw Error(ErrorCode::SolverSingular,
                "boundary-integral system numerically singular (cond ~ " +
                    std::to_string(cond_estimate_) + ")");
  }
}

Density NystromSolver::solve(const std::vector<std::vector<double>>& rhs) const {
  const int n_holes = domain_.hole_count();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(total_nodes_ + n_holes);
  for (int c = 0; c < component_count(); ++c) {
    const auto& cn = comps_[static_cast<size_t>(c)];
    const auto& r = rhs.at(static_cast<size_t>(c));
    if (static_cast<int>(r.size()) != cn.node_count) {
      throw Error(ErrorCode::InvalidArgument, "rhs size mismatch");
    }
    for (int j = 0; j < cn.node_count; ++j) b(index(c, j)) = r[static_cast<size_t>(j)];
  }
  Eigen::VectorXd x = lu_.solve(b);
  Density d;
  d.mu.resize(static_cast<size_t>(component_count()));
  for (int c = 0; c < component_count(); ++c) {
    const auto& cn = comps_[static_cast<size_t>(c)];
    auto& m = d.mu[static_cast<size_t>(c)];
    m.resize(static_cast<size_t>(cn.node_count));
    for (int j = 0; j < cn.node_count; ++j) m[static_cast<size_t>(j)] = x(index(c, j));
  }
  d.log_strength.resize(static_cast<size_t>(n_holes));
  for (int k = 0; k < n_holes; ++k) d.log_strength[static_cast<size_t>(k)] = x(total_nodes_ + k);
  return d;
}

Eigen::VectorXd NystromSolver::transpose_solve(const Eigen::VectorXd& rhs) const {
  return lu_transpose_.solve(rhs);
}

NystromSolver::Nearest NystromSolver::nearest_point(int comp, Point z) const {
  const auto& cn = comps_[static_cast<size_t>(comp)];
  const auto& curve = domain_.component(comp);
  int best = 0;
  double best_d2 = norm2(cn.w[0] - z);
  for (int j = 1; j < cn.node_count; ++j) {
    double d2 = norm2(cn.w[static_cast<size_t>(j)] - z);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  double t = cn.t[static_cast<size_t>(best)];
  for (int it = 0; it < 8; ++it) {
    Point g = curve.point(t) - z;
    Point dg = curve.derivative(t);
    Point d2g = curve.second_derivative(t);
    double g1 = 2 * dot(g, dg);
    double g2 = 2 * (norm2(dg) + dot(g, d2g));
    if (std::abs(g2) < 1e-300) break;
    double step = std::clamp(g1 / g2, -cn.h, cn.h);
    t -= step;
    if (std::abs(step) < 1e-14) break;
  }
  Point g = curve.point(t) - z;
  double dist = std::abs(g);
  if (dist * dist > best_d2) {
    t = cn.t[static_cast<size_t>(best)];
    dist = std::sqrt(best_d2);
  }
  return {dist, t, curve.speed(t)};
}

const NystromSolver::FineGeometry& NystromSolver::fine_geometry(int comp, int m) const {
  std::lock_guard<std::mutex> lock(fine_mutex_);
  auto& bucket = fine_cache_[static_cast<size_t>(comp)];
  for (const auto& fg : bucket) {
    if (fg->m == m) return *fg;
  }
  auto fg = std::make_shared<FineGeometry>();
  fg->m = m;
  fg->w.resize(static_cast<size_t>(m));
  fg->wp.resize(static_cast<size_t>(m));
  const auto& curve = domain_.component(comp);
  for (int j = 0; j < m; ++j) {
    double t = kTwoPi * j / m;
    fg->w[static_cast<size_t>(j)] = curve.point(t);
    fg->wp[static_cast<size_t>(j)] = curve.derivative(t);
  }
  bucket.push_back(fg);
  return *bucket.back();
}

SolverPtr make_solver(const Domain& domain, int node_count) {
  return std::make_shared<NystromSolver>(domain, node_count);
}

}  // namespace erbm
