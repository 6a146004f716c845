#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "erbm/er.hpp"
#include "erbm/rng.hpp"

namespace erbm {

struct RunConfig {
  uint64_t seed = 20240901;
  double epsilon = 1e-6;  // boundary capture distance as a fraction of diameter
  long max_events = 100000;
  long path_count = 100000;
  int worker_count = 0;  // 0 = hardware concurrency
  double collar_factor = 0.5;

  void validate() const;  // epsilon within (1e-9, 1e-2), counts positive
};

struct TrajectorySummary {
  std::vector<int> components_hit;  // component indices; last is 0 unless truncated
  double exit_t = 0;                // outer-boundary parameter at absorption
  long events = 0;
  bool truncated = false;
};

struct EmpiricalDistribution {
  std::vector<double> edges;  // bins+1 edges over [0, 2pi]
  std::vector<long> counts;
  long total = 0;
};

/// One Brownian exit draw by walk-on-spheres: nested maximal inscribed
/// circles until within epsilon of the boundary; returns the nearest boundary
/// point. Exact in law up to the epsilon capture bias.
struct WosExit {
  int component;
  double t;
  Point at;
  long steps;
};
WosExit wos_exit(const Domain& domain, Point z, double epsilon_abs, PathRng& rng,
                 long max_steps = 1000000);

/// Shared sampler state: the restart densities per hole (inverse-CDF sampled)
/// and the capture distance. Immutable after construction; paths are
/// embarrassingly parallel with per-path RNG streams.
class ErbmSampler {
 public:
  ErbmSampler(SolverPtr solver, RunConfig config);

  const Domain& domain() const { return solver_->domain(); }
  const RunConfig& config() const { return config_; }
  const RestartDensity& restart(int hole) const;

  /// One ERBM path from an interior point or a hole (1-based index).
  TrajectorySummary sample_path(const ErStart& start, uint64_t path_index) const;

  /// Exit histogram over the outer boundary from `path_count` paths.
  EmpiricalDistribution exit_distribution(const ErStart& start, int bins) const;

  struct ChainEstimate {
    Eigen::MatrixXd q;        // n x (n+1), empirical frequencies (rows sum to 1)
    Eigen::MatrixXd q_se;     // standard errors
    Eigen::MatrixXd p_tilde;  // conditioned on leaving the hole
    Eigen::MatrixXd p_se;
    long excursions_per_hole = 0;
  };
  /// Direct per-row excursion sampling of the component-hit chain.
  ChainEstimate estimate_chain(long excursions_per_hole) const;

  struct OccupationEstimate {
    double mean = 0;        // estimate of the expected occupation of the disk
    double std_error = 0;
    long paths = 0;
  };
  /// WoS Green-identity estimator of the expected occupation time of the
  /// probe disk before absorption. The probe must avoid the collar regions
  /// (restart jumps skip the hole-to-collar excursions); bias O(epsilon).
  OccupationEstimate occupation_in_disk(const ErStart& start, Point center,
                                        double radius) const;

 private:
  SolverPtr solver_;
  RunConfig config_;
  double epsilon_abs_;
  std::vector<std::shared_ptr<const RestartDensity>> restarts_;

  template <typename PerPath>
  void run_paths(long count, const PerPath& body) const;  // deterministic pool
};

/// Total-variation distance between an empirical histogram and deterministic
/// bin masses.
double total_variation(const EmpiricalDistribution& emp, const std::vector<double>& masses);

/// Deterministic ER bin masses over a uniform partition of the outer
/// boundary, via er_harmonic_measure per bin.
std::vector<double> er_exit_bin_masses(ErWorkspacePtr ws, const ErStart& start, int bins);

struct ExitComparison {
  EmpiricalDistribution empirical;
  std::vector<double> deterministic;
  double tv = 0;
};
/// Runs the sampler and compares against er_harmonic_measure bin masses.
ExitComparison estimate_exit_distribution(const ErbmSampler& sampler, ErWorkspacePtr ws,
                                          const ErStart& start, int bins);

}  // namespace erbm
