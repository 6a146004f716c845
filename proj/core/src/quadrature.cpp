#include "erbm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace erbm {

namespace {

GaussRule build_gauss(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<size_t>(i)] = x;
    rule.weights[static_cast<size_t>(i)] = 2.0 / ((1 - x * x) * pp * pp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_gauss(order)).first;
  return it->second;
}

namespace {

Point gauss_segment(const std::function<Point(Point)>& f, Point a, Point b, int order) {
  const GaussRule& rule = gauss_legendre(order);
  Point mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Point acc(0, 0);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + rule.nodes[i] * half);
  }
  return acc * half;
}

Point adaptive(const std::function<Point(Point)>& f, Point a, Point b, Point whole, double tol,
               int depth, int max_depth) {
  Point mid = 0.5 * (a + b);
  Point left = gauss_segment(f, a, mid, 16);
  Point right = gauss_segment(f, mid, b, 16);
  Point sum = left + right;
  if (std::abs(sum - whole) < tol || depth >= max_depth) return sum;
  return adaptive(f, a, mid, left, 0.5 * tol, depth + 1, max_depth) +
         adaptive(f, mid, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

Point integrate_segment(const std::function<Point(Point)>& f, Point a, Point b, double tol,
                        int max_depth) {
  Point whole = gauss_segment(f, a, b, 16);
  return adaptive(f, a, b, whole, tol, 0, max_depth);
}

}  // namespace erbm
