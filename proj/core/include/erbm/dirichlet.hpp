#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "erbm/field.hpp"
#include "erbm/nystrom.hpp"

namespace erbm {

/// Harmonic field represented by the solved double-layer density plus hole
/// log sources. Evaluation is spectrally accurate in the interior; close to a
/// component the density and geometry are trigonometrically upsampled and the
/// nearest-node density value is subtracted against the exact winding term.
class LayerField final : public BoundaryField {
 public:
  LayerField(SolverPtr solver, Density density);

  double value(Point z) const override;
  Point gradient(Point z) const override;

  /// Boundary limit from inside the domain at (component, parameter t).
  double boundary_trace(int comp, double t) const override;

  const Density& density() const { return density_; }
  const NystromSolver& solver() const { return *solver_; }
  SolverPtr solver_ptr() const { return solver_; }

 private:
  struct NearInfo {
    int comp;
    double dist;
    double t;
    double delta;  // parameter-plane distance estimate
  };
  double component_value(int c, Point z, const std::optional<NearInfo>& near) const;
  Point component_gradient(int c, Point z, const std::optional<NearInfo>& near) const;
  const std::vector<double>& fine_density(int comp, int m) const;
  const TrigSeries& series(int comp) const;
  int fine_size(const NearInfo& near, bool for_gradient) const;
  double log_terms(Point z) const;
  Point log_gradient(Point z) const;

  SolverPtr solver_;
  Density density_;
  mutable std::mutex cache_mutex_;
  mutable std::vector<std::shared_ptr<const TrigSeries>> series_cache_;
  mutable std::vector<std::vector<std::pair<int, std::shared_ptr<const std::vector<double>>>>>
      fine_cache_;
};

/// A solved Dirichlet problem: boundary data table plus interior evaluators.
class HarmonicSolution : public BoundaryField {
 public:
  HarmonicSolution(SolverPtr solver, std::vector<std::vector<double>> data);

  double value(Point z) const override { return layer_->value(z); }
  Point gradient(Point z) const override { return layer_->gradient(z); }
  double boundary_trace(int comp, double t) const override {
    return layer_->boundary_trace(comp, t);
  }

  const std::vector<std::vector<double>>& boundary_data() const { return data_; }
  double data_min() const { return data_min_; }
  double data_max() const { return data_max_; }
  const LayerField& layer() const { return *layer_; }
  std::shared_ptr<const LayerField> layer_ptr() const { return layer_; }
  const Domain& domain() const { return layer_->solver().domain(); }
  SolverPtr solver_ptr() const { return layer_->solver_ptr(); }

 private:
  std::shared_ptr<const LayerField> layer_;
  std::vector<std::vector<double>> data_;
  double data_min_ = 0, data_max_ = 0;
};

using BoundaryData = std::function<double(int comp, double t, Point z)>;

/// Samples `data` at the collocation nodes and solves. The solver may be
/// shared across many solves of the same domain/resolution.
HarmonicSolution solve_dirichlet(SolverPtr solver, const BoundaryData& data);
HarmonicSolution solve_dirichlet(SolverPtr solver, std::vector<std::vector<double>> node_data);
HarmonicSolution solve_dirichlet(const Domain& domain, const BoundaryData& data,
                                 int node_count = 0);

}  // namespace erbm
