#pragma once

#include <vector>

#include "erbm/point.hpp"

namespace erbm {

/// Real-valued trigonometric interpolant through N uniform samples on
/// [0, 2pi): f(t) = sum_{k=-K..K} c_k e^{ikt} with the Nyquist mode split
/// symmetrically for even N. Exact at the sample nodes.
class TrigSeries {
 public:
  TrigSeries() = default;
  static TrigSeries fit(const std::vector<double>& samples);

  double eval(double t) const;
  double derivative(double t) const;
  /// Values at M uniform nodes (trigonometric upsampling).
  std::vector<double> resample(int m) const;

  /// Antiderivative F with F(0) = 0: F(t) = c0*t + sum_{k!=0} c_k (e^{ikt}-1)/(ik).
  /// The linear coefficient c0 carries the non-periodic part.
  struct Antiderivative {
    double linear = 0;
    std::vector<Point> coeff;  // index K+k
    int max_mode = 0;
    double eval(double t) const;
  };
  Antiderivative antiderivative() const;

  double mean() const;
  int max_mode() const { return max_mode_; }

 private:
  std::vector<Point> coeff_;  // c_{-K}..c_K at index K+k
  int max_mode_ = 0;
};

}  // namespace erbm
