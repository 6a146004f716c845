#include "erbm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <thread>

#include "erbm/constants.hpp"

namespace erbm {

FieldDiagnostics field_diagnostics(const HarmonicField& field, const Domain& domain,
                                   const GridSpec& grid, const std::vector<double>& levels) {
  const int n = grid.resolution;
  // Bounding box of the outer curve with a small pad.
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (int i = 0; i < 512; ++i) {
    Point p = domain.outer().point(kTwoPi * i / 512);
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  const double dx = (xmax - xmin) / n, dy = (ymax - ymin) / n;
  const double cell_diag = std::hypot(dx, dy);

  std::vector<double> value(static_cast<size_t>(n) * n,
                            std::numeric_limits<double>::quiet_NaN());
  std::vector<double> gradmag(static_cast<size_t>(n) * n, -1.0);
  std::vector<char> near_outer(static_cast<size_t>(n) * n, 0);

  int workers = grid.workers > 0
                    ? grid.workers
                    : std::max(1u, std::thread::hardware_concurrency());
  auto process_rows = [&](int row0, int row1) {
    for (int j = row0; j < row1; ++j) {
      double y = ymin + (j + 0.5) * dy;
      for (int i = 0; i < n; ++i) {
        double x = xmin + (i + 0.5) * dx;
        Point z(x, y);
        if (!domain.contains(z)) continue;
        auto cb = domain.closest_boundary(z);
        if (cb.distance < grid.boundary_margin) continue;
        if (grid.exclude && std::abs(z - *grid.exclude) < grid.exclude_radius) continue;
        size_t idx = static_cast<size_t>(j) * n + i;
        value[idx] = field.value(z);
        gradmag[idx] = std::abs(field.gradient(z));
        if (cb.component == 0 && cb.distance < grid.boundary_margin + 2 * cell_diag) {
          near_outer[idx] = 1;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  int rows_per = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int r0 = w * rows_per, r1 = std::min(n, r0 + rows_per);
    if (r0 >= r1) break;
    pool.emplace_back(process_rows, r0, r1);
  }
  for (auto& th : pool) th.join();

  FieldDiagnostics out;
  out.min_gradient = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      size_t idx = static_cast<size_t>(j) * n + i;
      if (gradmag[idx] < 0) continue;
      ++out.interior_cells;
      if (gradmag[idx] < out.min_gradient) {
        out.min_gradient = gradmag[idx];
        out.argmin_gradient = Point(xmin + (i + 0.5) * dx, ymin + (j + 0.5) * dy);
      }
    }
  }
  if (out.interior_cells == 0) {
    out.min_gradient = 0;
    return out;
  }
  out.degenerate_gradient = out.min_gradient < kGradientAnomaly;

  // Sublevel connectivity by BFS with a virtual node for the outer boundary.
  for (double level : levels) {
    std::vector<char> in_set(static_cast<size_t>(n) * n, 0);
    for (size_t idx = 0; idx < in_set.size(); ++idx) {
      in_set[idx] = gradmag[idx] >= 0 && value[idx] <= level;
    }
    std::vector<int> label(static_cast<size_t>(n) * n, -1);
    int components = 0;
    int outer_label = -1;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        size_t idx = static_cast<size_t>(j) * n + i;
        if (!in_set[idx] || label[idx] >= 0) continue;
        int lbl = components++;
        bool touches_outer = false;
        std::queue<std::pair<int, int>> bfs;
        bfs.emplace(i, j);
        label[idx] = lbl;
        while (!bfs.empty()) {
          auto [ci, cj] = bfs.front();
          bfs.pop();
          size_t cidx = static_cast<size_t>(cj) * n + ci;
          if (near_outer[cidx]) touches_outer = true;
          const int di[4] = {1, -1, 0, 0};
          const int dj[4] = {0, 0, 1, -1};
          for (int k = 0; k < 4; ++k) {
            int ni = ci + di[k], nj = cj + dj[k];
            if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
            size_t nidx = static_cast<size_t>(nj) * n + ni;
            if (!in_set[nidx] || label[nidx] >= 0) continue;
            label[nidx] = lbl;
            bfs.emplace(ni, nj);
          }
        }
        if (touches_outer) {
          if (outer_label < 0) {
            outer_label = lbl;
          } else {
            --components;  // merged through the outer boundary
          }
        }
      }
    }
    out.sublevel_components.emplace_back(level, components);
  }
  return out;
}

}  // namespace erbm
