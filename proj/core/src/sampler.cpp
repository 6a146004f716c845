#include "erbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "erbm/constants.hpp"
#include "erbm/errors.hpp"
#include "erbm/quadrature.hpp"

namespace erbm {

void RunConfig::validate() const {
  if (!(epsilon > 1e-9 && epsilon < 1e-2)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (1e-9, 1e-2)");
  }
  if (max_events <= 0 || path_count <= 0) {
    throw Error(ErrorCode::InvalidArgument, "counts must be positive");
  }
}

ErbmSampler::ErbmSampler(SolverPtr solver, RunConfig config)
    : solver_(std::move(solver)), config_(config) {
  config_.validate();
  epsilon_abs_ = config_.epsilon * solver_->domain().diameter();
  for (int i = 1; i <= solver_->domain().hole_count(); ++i) {
    restarts_.push_back(std::make_shared<RestartDensity>(solver_, i, config_.collar_factor));
  }
}

const RestartDensity& ErbmSampler::restart(int hole) const {
  return *restarts_.at(static_cast<size_t>(hole - 1));
}

TrajectorySummary ErbmSampler::sample_path(const ErStart& start, uint64_t path_index) const {
  PathRng rng(config_.seed, path_index);
  TrajectorySummary out;
  Point z;
  if (std::holds_alternative<int>(start)) {
    int hole = std::get<int>(start);
    z = restart(hole).sample_point(rng.uniform());
  } else {
    z = std::get<Point>(start);
  }
  while (true) {
    WosExit exit = wos_exit(domain(), z, epsilon_abs_, rng);
    out.components_hit.push_back(exit.component);
    ++out.events;
    if (exit.component == 0) {
      out.exit_t = exit.t;
      return out;
    }
    if (out.events >= config_.max_events) {
      out.truncated = true;
      return out;
    }
    z = restart(exit.component).sample_point(rng.uniform());
  }
}

template <typename PerPath>
void ErbmSampler::run_paths(long count, const PerPath& body) const {
  int workers = config_.worker_count > 0
                    ? config_.worker_count
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long>(workers, count));
  long chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    long lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi, w] { body(w, lo, hi); });
  }
  for (auto& th : pool) th.join();
}

EmpiricalDistribution ErbmSampler::exit_distribution(const ErStart& start, int bins) const {
  if (bins < 8) throw Error(ErrorCode::InvalidArgument, "need at least 8 bins");
  EmpiricalDistribution dist;
  dist.edges.resize(static_cast<size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) dist.edges[static_cast<size_t>(b)] = kTwoPi * b / bins;
  const long count = config_.path_count;

  int workers = config_.worker_count > 0
                    ? config_.worker_count
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long>(workers, count));
  std::vector<std::vector<long>> partial(static_cast<size_t>(workers),
                                         std::vector<long>(static_cast<size_t>(bins), 0));
  run_paths(count, [&](int w, long lo, long hi) {
    auto& mine = partial[static_cast<size_t>(w)];
    for (long p = lo; p < hi; ++p) {
      auto traj = sample_path(start, static_cast<uint64_t>(p));
      if (traj.truncated) continue;
      int b = std::clamp(static_cast<int>(traj.exit_t / kTwoPi * bins), 0, bins - 1);
      ++mine[static_cast<size_t>(b)];
    }
  });
  // Fixed merge order by worker index; integer counts are exact.
  dist.counts.assign(static_cast<size_t>(bins), 0);
  for (const auto& mine : partial) {
    for (int b = 0; b < bins; ++b) dist.counts[static_cast<size_t>(b)] += mine[static_cast<size_t>(b)];
  }
  dist.total = 0;
  for (long c : dist.counts) dist.total += c;
  return dist;
}

ErbmSampler::ChainEstimate ErbmSampler::estimate_chain(long excursions_per_hole) const {
  const int n = domain().hole_count();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "chain estimation needs holes");
  ChainEstimate est;
  est.excursions_per_hole = excursions_per_hole;
  est.q.setZero(n, n + 1);
  est.q_se.setZero(n, n + 1);
  est.p_tilde.setZero(n, n + 1);
  est.p_se.setZero(n, n + 1);

  for (int i = 1; i <= n; ++i) {
    int workers = config_.worker_count > 0
                      ? config_.worker_count
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(std::min<long>(workers, excursions_per_hole));
    std::vector<std::vector<long>> partial(static_cast<size_t>(workers),
                                           std::vector<long>(static_cast<size_t>(n) + 1, 0));
    run_paths(excursions_per_hole, [&](int w, long lo, long hi) {
      auto& mine = partial[static_cast<size_t>(w)];
      for (long p = lo; p < hi; ++p) {
        // Stream ids disjoint per row: hole index folded into the stream.
        PathRng rng(config_.seed, splitmix_combine(0xE5C0u + static_cast<uint64_t>(i),
                                                   static_cast<uint64_t>(p)));
        Point z = restart(i).sample_point(rng.uniform());
        WosExit exit = wos_exit(domain(), z, epsilon_abs_, rng);
        ++mine[static_cast<size_t>(exit.component)];
      }
    });
    std::vector<long> counts(static_cast<size_t>(n) + 1, 0);
    for (const auto& mine : partial) {
      for (int k = 0; k <= n; ++k) counts[static_cast<size_t>(k)] += mine[static_cast<size_t>(k)];
    }
    const double m = static_cast<double>(excursions_per_hole);
    long left = excursions_per_hole - counts[static_cast<size_t>(i)];
    for (int k = 0; k <= n; ++k) {
      double q = counts[static_cast<size_t>(k)] / m;
      est.q(i - 1, k) = q;
      est.q_se(i - 1, k) = std::sqrt(std::max(q * (1 - q), 1e-12) / m);
      if (k != i && left > 0) {
        double pt = static_cast<double>(counts[static_cast<size_t>(k)]) / left;
        est.p_tilde(i - 1, k) = pt;
        est.p_se(i - 1, k) = std::sqrt(std::max(pt * (1 - pt), 1e-12) / left);
      }
    }
  }
  return est;
}

namespace {

// Exact integral of (1/pi) ln(r/|w-x|) over a probe disk fully inside the
// ball; numerical polar quadrature when the disk straddles the ball edge.
double ball_occupation(Point x, double r, Point center, double rho) {
  double d = std::abs(center - x);
  if (d >= r + rho) return 0.0;
  if (d + rho <= r) {
    double int_log;
    if (d >= rho) {
      int_log = kPi * rho * rho * std::log(d);  // mean-value property
    } else {
      int_log = kPi * rho * rho * (std::log(rho) - 0.5) + kPi * d * d / 2.0;
    }
    return rho * rho * std::log(r) - int_log / kPi;
  }
  // Partial overlap: 24 x 24 polar grid over the probe disk.
  const int nr = 24, na = 24;
  double acc = 0;
  for (int ir = 0; ir < nr; ++ir) {
    double rr = rho * (ir + 0.5) / nr;
    for (int ia = 0; ia < na; ++ia) {
      Point w = center + rr * std::polar(1.0, kTwoPi * ia / na);
      double dist = std::abs(w - x);
      if (dist >= r) continue;
      acc += std::log(r / std::max(dist, 1e-14)) / kPi * rr * (rho / nr) * (kTwoPi / na);
    }
  }
  return acc;
}

}  // namespace

ErbmSampler::OccupationEstimate ErbmSampler::occupation_in_disk(const ErStart& start,
                                                                Point center,
                                                                double radius) const {
  const long count = config_.path_count;
  int workers = config_.worker_count > 0
                    ? config_.worker_count
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long>(workers, count));
  std::vector<double> sum(static_cast<size_t>(workers), 0.0);
  std::vector<double> sum2(static_cast<size_t>(workers), 0.0);
  run_paths(count, [&](int w, long lo, long hi) {
    for (long p = lo; p < hi; ++p) {
      PathRng rng(config_.seed, static_cast<uint64_t>(p));
      Point z;
      if (std::holds_alternative<int>(start)) {
        z = restart(std::get<int>(start)).sample_point(rng.uniform());
      } else {
        z = std::get<Point>(start);
      }
      double acc = 0;
      long events = 0;
      while (true) {
        // Inline WoS so each ball sojourn contributes its occupation mass.
        long steps = 0;
        int comp = 0;
        double t_exit = 0;
        while (true) {
          double best = std::numeric_limits<double>::infinity();
          int best_comp = 0;
          double best_t = 0;
          for (int c = 0; c < domain().component_count(); ++c) {
            auto cp = domain().component(c).closest_point(z);
            if (cp.distance < best) {
              best = cp.distance;
              best_comp = c;
              best_t = cp.t;
            }
          }
          if (best < epsilon_abs_) {
            comp = best_comp;
            t_exit = best_t;
            break;
          }
          acc += ball_occupation(z, best, center, radius);
          z += best * std::polar(1.0, kTwoPi * rng.uniform());
          if (++steps > kWosMaxSteps) {
            throw Error(ErrorCode::MaxStepsExceeded, "walk-on-spheres step budget");
          }
        }
        (void)t_exit;
        ++events;
        if (comp == 0 || events >= config_.max_events) break;
        z = restart(comp).sample_point(rng.uniform());
      }
      sum[static_cast<size_t>(w)] += acc;
      sum2[static_cast<size_t>(w)] += acc * acc;
    }
  });
  double s = 0, s2 = 0;
  for (int w = 0; w < workers; ++w) {
    s += sum[static_cast<size_t>(w)];
    s2 += sum2[static_cast<size_t>(w)];
  }
  OccupationEstimate est;
  est.paths = count;
  est.mean = s / count;
  double var = std::max(s2 / count - est.mean * est.mean, 0.0);
  est.std_error = std::sqrt(var / count);
  return est;
}

double total_variation(const EmpiricalDistribution& emp, const std::vector<double>& masses) {
  if (emp.counts.size() != masses.size()) {
    throw Error(ErrorCode::InvalidArgument, "bin count mismatch");
  }
  double tv = 0;
  for (size_t b = 0; b < masses.size(); ++b) {
    double p_emp = emp.total > 0 ? static_cast<double>(emp.counts[b]) / emp.total : 0.0;
    tv += std::abs(p_emp - masses[b]);
  }
  return 0.5 * tv;
}

std::vector<double> er_exit_bin_masses(ErWorkspacePtr ws, const ErStart& start, int bins) {
  std::vector<double> masses(static_cast<size_t>(bins), 0.0);
  for (int b = 0; b < bins; ++b) {
    masses[static_cast<size_t>(b)] =
        er_harmonic_measure(ws, start, BoundaryArc::arc(0, kTwoPi * b / bins, kTwoPi * (b + 1) / bins));
  }
  return masses;
}

ExitComparison estimate_exit_distribution(const ErbmSampler& sampler, ErWorkspacePtr ws,
                                          const ErStart& start, int bins) {
  ExitComparison cmp;
  cmp.empirical = sampler.exit_distribution(start, bins);
  cmp.deterministic = er_exit_bin_masses(std::move(ws), start, bins);
  cmp.tv = total_variation(cmp.empirical, cmp.deterministic);
  return cmp;
}

}  // namespace erbm
