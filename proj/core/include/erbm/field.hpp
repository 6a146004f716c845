#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "erbm/point.hpp"

namespace erbm {

/// A scalar harmonic field with a gradient. Gradients are returned as complex
/// numbers g = u_x + i*u_y. Implementations are immutable after construction
/// and reentrant for concurrent evaluation.
class HarmonicField {
 public:
  virtual ~HarmonicField() = default;
  virtual double value(Point z) const = 0;
  virtual Point gradient(Point z) const = 0;
};

using FieldPtr = std::shared_ptr<const HarmonicField>;

/// A harmonic field attached to a domain whose boundary limit (taken from
/// inside) can be evaluated directly.
class BoundaryField : public HarmonicField {
 public:
  virtual double boundary_trace(int comp, double t) const = 0;
};

/// coeff * ln|z - pole|.
class LogField final : public HarmonicField {
 public:
  LogField(Point pole, double coeff) : pole_(pole), coeff_(coeff) {}
  double value(Point z) const override { return coeff_ * std::log(std::abs(z - pole_)); }
  Point gradient(Point z) const override {
    Point d = z - pole_;
    return coeff_ * d / norm2(d);
  }
  Point pole() const { return pole_; }
  double coeff() const { return coeff_; }

 private:
  Point pole_;
  double coeff_;
};

/// Re[c/(z - at)]: a point dipole, the exact leading singularity of a Poisson
/// kernel at a locally analytic boundary point.
class DipoleField final : public HarmonicField {
 public:
  DipoleField(Point at, Point c) : at_(at), c_(c) {}
  double value(Point z) const override {
    Point d = z - at_;
    return (c_.real() * d.real() + c_.imag() * d.imag()) / norm2(d);
  }
  Point gradient(Point z) const override {
    Point d = z - at_;
    return std::conj(-c_ / (d * d));  // grad Re F = conj(F') for F = c/(z-at)
  }
  Point at() const { return at_; }

 private:
  Point at_;
  Point c_;
};

/// Weighted sum of fields.
class FieldSum final : public HarmonicField {
 public:
  void add(double weight, FieldPtr field) { terms_.emplace_back(weight, std::move(field)); }
  double value(Point z) const override {
    double v = 0;
    for (const auto& [w, f] : terms_) v += w * f->value(z);
    return v;
  }
  Point gradient(Point z) const override {
    Point g(0, 0);
    for (const auto& [w, f] : terms_) g += w * f->gradient(z);
    return g;
  }
  const std::vector<std::pair<double, FieldPtr>>& terms() const { return terms_; }

 private:
  std::vector<std::pair<double, FieldPtr>> terms_;
};

/// Wraps closures (used for closed-form comparison fields and diagnostics).
class FunctionField final : public HarmonicField {
 public:
  FunctionField(std::function<double(Point)> v, std::function<Point(Point)> g)
      : v_(std::move(v)), g_(std::move(g)) {}
  double value(Point z) const override { return v_(z); }
  Point gradient(Point z) const override { return g_(z); }

 private:
  std::function<double(Point)> v_;
  std::function<Point(Point)> g_;
};

}  // namespace erbm
