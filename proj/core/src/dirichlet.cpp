#include "erbm/dirichlet.hpp"

#include <algorithm>
#include <cmath>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"

namespace erbm {

namespace {

constexpr double kLogAccuracy = 34.0;   // -ln(target quadrature error), with margin
constexpr int kMaxFineNodes = 1 << 17;  // upsampling cap

}  // namespace

LayerField::LayerField(SolverPtr solver, Density density)
    : solver_(std::move(solver)), density_(std::move(density)) {
  series_cache_.resize(static_cast<size_t>(solver_->component_count()));
  fine_cache_.resize(static_cast<size_t>(solver_->component_count()));
}

const TrigSeries& LayerField::series(int comp) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto& slot = series_cache_[static_cast<size_t>(comp)];
  if (!slot) {
    slot = std::make_shared<TrigSeries>(
        TrigSeries::fit(density_.mu[static_cast<size_t>(comp)]));
  }
  return *slot;
}

const std::vector<double>& LayerField::fine_density(int comp, int m) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    for (const auto& [size, vec] : fine_cache_[static_cast<size_t>(comp)]) {
      if (size == m) return *vec;
    }
  }
  auto vec = std::make_shared<std::vector<double>>(series(comp).resample(m));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto& bucket = fine_cache_[static_cast<size_t>(comp)];
  for (const auto& [size, existing] : bucket) {
    if (size == m) return *existing;
  }
  bucket.emplace_back(m, vec);
  return *bucket.back().second;
}

int LayerField::fine_size(const NearInfo& near, bool for_gradient) const {
  double needed = kLogAccuracy + std::max(0.0, -std::log(std::max(near.delta, 1e-14)));
  if (for_gradient) needed += 4.0;
  int m = static_cast<int>(std::ceil(needed / std::max(near.delta, 1e-14)));
  int size = 2 * solver_->component(near.comp).node_count;
  while (size < m && size < kMaxFineNodes) size *= 2;
  return std::min(size, kMaxFineNodes);
}

double LayerField::log_terms(Point z) const {
  double v = 0;
  for (size_t k = 0; k < density_.log_strength.size(); ++k) {
    v += density_.log_strength[k] * std::log(std::abs(z - solver_->hole_center(static_cast<int>(k))));
  }
  return v;
}

Point LayerField::log_gradient(Point z) const {
  Point g(0, 0);
  for (size_t k = 0; k < density_.log_strength.size(); ++k) {
    Point d = z - solver_->hole_center(static_cast<int>(k));
    g += density_.log_strength[k] * d / norm2(d);
  }
  return g;
}

double LayerField::component_value(int c, Point z, const std::optional<NearInfo>& near) const {
  const auto& cn = solver_->component(c);
  const double factor = cn.sigma / kTwoPi;
  double acc = 0;
  if (!near) {
    const auto& mu = density_.mu[static_cast<size_t>(c)];
    for (int j = 0; j < cn.node_count; ++j) {
      acc += ((cn.wp[static_cast<size_t>(j)] / (cn.w[static_cast<size_t>(j)] - z)).imag()) *
             mu[static_cast<size_t>(j)];
    }
    return factor * cn.h * acc;
  }
  // Near evaluation: upsample and subtract the nearest-point density against
  // the exact winding integral (1 inside the outer curve, 0 outside a hole).
  const int m = fine_size(*near, false);
  const auto& fg = solver_->fine_geometry(c, m);
  const auto& mu = fine_density(c, m);
  const double mu_star = series(c).eval(near->t);
  for (int j = 0; j < m; ++j) {
    Point dw = fg.w[static_cast<size_t>(j)] - z;
    double d2 = norm2(dw);
    if (d2 < 1e-28) continue;  // fine node collides with z; excluded by subtraction
    acc += (fg.wp[static_cast<size_t>(j)] / dw).imag() * (mu[static_cast<size_t>(j)] - mu_star);
  }
  double winding_term = (c == 0) ? mu_star * cn.sigma : 0.0;
  return factor * (kTwoPi / m) * acc + winding_term;
}

Point LayerField::component_gradient(int c, Point z,
                                     const std::optional<NearInfo>& near) const {
  const auto& cn = solver_->component(c);
  const double factor = cn.sigma / kTwoPi;
  Point acc(0, 0);
  // d/dz of Im[w'/(w-z)]: gradient (u_x + i u_y) = i * conj(w'/(w-z)^2).
  if (!near) {
    const auto& mu = density_.mu[static_cast<size_t>(c)];
    for (int j = 0; j < cn.node_count; ++j) {
      Point dw = cn.w[static_cast<size_t>(j)] - z;
      acc += std::conj(cn.wp[static_cast<size_t>(j)] / (dw * dw)) * mu[static_cast<size_t>(j)];
    }
    return Point(0, 1) * acc * (factor * cn.h);
  }
  const int m = fine_size(*near, true);
  const auto& fg = solver_->fine_geometry(c, m);
  const auto& mu = fine_density(c, m);
  const double mu_star = series(c).eval(near->t);
  for (int j = 0; j < m; ++j) {
    Point dw = fg.w[static_cast<size_t>(j)] - z;
    double d2 = norm2(dw);
    if (d2 < 1e-28) continue;
    acc += std::conj(fg.wp[static_cast<size_t>(j)] / (dw * dw)) *
           (mu[static_cast<size_t>(j)] - mu_star);
  }
  // The winding term is locally constant, so it contributes no gradient.
  return Point(0, 1) * acc * (factor * kTwoPi / m);
}

double LayerField::value(Point z) const {
  double v = log_terms(z);
  for (int c = 0; c < solver_->component_count(); ++c) {
    const auto& cn = solver_->component(c);
    auto cp = solver_->nearest_point(c, z);
    double delta = cp.distance / std::max(cp.speed, 1e-12);
    std::optional<NearInfo> near;
    if (cn.node_count * delta < kLogAccuracy) near = NearInfo{c, cp.distance, cp.t, delta};
    v += component_value(c, z, near);
  }
  return v;
}

Point LayerField::gradient(Point z) const {
  Point g = log_gradient(z);
  for (int c = 0; c < solver_->component_count(); ++c) {
    const auto& cn = solver_->component(c);
    auto cp = solver_->nearest_point(c, z);
    double delta = cp.distance / std::max(cp.speed, 1e-12);
    std::optional<NearInfo> near;
    if (cn.node_count * delta < kLogAccuracy + 4.0) near = NearInfo{c, cp.distance, cp.t, delta};
    g += component_gradient(c, z, near);
  }
  return g;
}

double LayerField::boundary_trace(int comp, double t) const {
  const auto& curve = solver_->domain().component(comp);
  const Point z0 = curve.point(t);
  const double scale = solver_->scale();
  double v = log_terms(z0);
  for (int c = 0; c < solver_->component_count(); ++c) {
    const auto& cn = solver_->component(c);
    const auto& mu = density_.mu[static_cast<size_t>(c)];
    const double factor = cn.sigma * cn.h / kTwoPi;
    double acc = 0;
    if (c != comp) {
      for (int j = 0; j < cn.node_count; ++j) {
        acc += ((cn.wp[static_cast<size_t>(j)] / (cn.w[static_cast<size_t>(j)] - z0)).imag()) *
               mu[static_cast<size_t>(j)];
      }
    } else {
      // Principal value over the own component: the kernel is smooth with the
      // curvature limit on the diagonal, so the plain trapezoid stays spectral.
      for (int j = 0; j < cn.node_count; ++j) {
        Point dw = cn.w[static_cast<size_t>(j)] - z0;
        double kernel;
        if (std::abs(dw) < 1e-9 * scale) {
          kernel = (cn.wpp[static_cast<size_t>(j)] / (2.0 * cn.wp[static_cast<size_t>(j)])).imag();
        } else {
          kernel = (cn.wp[static_cast<size_t>(j)] / dw).imag();
        }
        acc += kernel * mu[static_cast<size_t>(j)];
      }
    }
    v += factor * acc;
  }
  // Jump term from inside D.
  v += 0.5 * series(comp).eval(t);
  return v;
}

HarmonicSolution::HarmonicSolution(SolverPtr solver, std::vector<std::vector<double>> data)
    : data_(std::move(data)) {
  layer_ = std::make_shared<LayerField>(solver, solver->solve(data_));
  data_min_ = data_[0].empty() ? 0 : data_[0][0];
  data_max_ = data_min_;
  for (const auto& comp : data_) {
    for (double v : comp) {
      data_min_ = std::min(data_min_, v);
      data_max_ = std::max(data_max_, v);
    }
  }
}

HarmonicSolution solve_dirichlet(SolverPtr solver, std::vector<std::vector<double>> node_data) {
  return HarmonicSolution(std::move(solver), std::move(node_data));
}

HarmonicSolution solve_dirichlet(SolverPtr solver, const BoundaryData& data) {
  std::vector<std::vector<double>> node_data(static_cast<size_t>(solver->component_count()));
  for (int c = 0; c < solver->component_count(); ++c) {
    const auto& cn = solver->component(c);
    auto& row = node_data[static_cast<size_t>(c)];
    row.resize(static_cast<size_t>(cn.node_count));
    for (int j = 0; j < cn.node_count; ++j) {
      row[static_cast<size_t>(j)] =
          data(c, cn.t[static_cast<size_t>(j)], cn.w[static_cast<size_t>(j)]);
    }
  }
  return HarmonicSolution(std::move(solver), std::move(node_data));
}

HarmonicSolution solve_dirichlet(const Domain& domain, const BoundaryData& data, int node_count) {
  return solve_dirichlet(make_solver(domain, node_count), data);
}

}  // namespace erbm
