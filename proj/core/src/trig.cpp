#include "erbm/trig.hpp"

#include <cmath>

#include "erbm/errors.hpp"

namespace erbm {

TrigSeries TrigSeries::fit(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  const int K = n / 2;
  TrigSeries s;
  s.max_mode_ = K;
  s.coeff_.assign(static_cast<size_t>(2 * K + 1), Point(0, 0));
  for (int k = -K; k <= K; ++k) {
    Point c(0, 0);
    for (int j = 0; j < n; ++j) {
      c += samples[static_cast<size_t>(j)] * std::polar(1.0, -k * kTwoPi * j / n);
    }
    c /= static_cast<double>(n);
    // For even n the +-Nyquist coefficients coincide; split them evenly so the
    // interpolant is real and exact at the nodes.
    if (n % 2 == 0 && (k == K || k == -K)) c *= 0.5;
    s.coeff_[static_cast<size_t>(k + K)] = c;
  }
  return s;
}

double TrigSeries::eval(double t) const {
  const int K = max_mode_;
  Point e = std::polar(1.0, t);
  Point ekt = std::polar(1.0, -K * t);
  Point sum(0, 0);
  for (int k = -K; k <= K; ++k) {
    sum += coeff_[static_cast<size_t>(k + K)] * ekt;
    ekt *= e;
  }
  return sum.real();
}

double TrigSeries::derivative(double t) const {
  const int K = max_mode_;
  Point e = std::polar(1.0, t);
  Point ekt = std::polar(1.0, -K * t);
  Point sum(0, 0);
  for (int k = -K; k <= K; ++k) {
    sum += Point(0, k) * coeff_[static_cast<size_t>(k + K)] * ekt;
    ekt *= e;
  }
  return sum.real();
}

std::vector<double> TrigSeries::resample(int m) const {
  std::vector<Point> acc(static_cast<size_t>(m), Point(0, 0));
  for (int k = -max_mode_; k <= max_mode_; ++k) {
    Point c = coeff_[static_cast<size_t>(k + max_mode_)];
    if (c == Point(0, 0)) continue;
    Point step = std::polar(1.0, k * kTwoPi / m);
    Point cur(1, 0);
    for (int j = 0; j < m; ++j) {
      acc[static_cast<size_t>(j)] += c * cur;
      cur *= step;
    }
  }
  std::vector<double> out(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) out[static_cast<size_t>(j)] = acc[static_cast<size_t>(j)].real();
  return out;
}

double TrigSeries::mean() const { return coeff_[static_cast<size_t>(max_mode_)].real(); }

TrigSeries::Antiderivative TrigSeries::antiderivative() const {
  Antiderivative a;
  a.max_mode = max_mode_;
  a.linear = mean();
  a.coeff.assign(coeff_.size(), Point(0, 0));
  for (int k = -max_mode_; k <= max_mode_; ++k) {
    if (k == 0) continue;
    a.coeff[static_cast<size_t>(k + max_mode_)] =
        coeff_[static_cast<size_t>(k + max_mode_)] / Point(0, k);
  }
  return a;
}

double TrigSeries::Antiderivative::eval(double t) const {
  const int K = max_mode;
  Point e = std::polar(1.0, t);
  Point ekt = std::polar(1.0, -K * t);
  Point sum(0, 0);
  for (int k = -K; k <= K; ++k) {
    if (k != 0) {
      sum += coeff[static_cast<size_t>(k + K)] * (ekt - 1.0);
    }
    ekt *= e;
  }
  return linear * t + sum.real();
}

}  // namespace erbm
