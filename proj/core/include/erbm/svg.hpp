#pragma once

#include <string>
#include <vector>

#include "erbm/domain.hpp"

namespace erbm {

/// Minimal deterministic SVG emitter (fixed viewBox, fixed precision).
class SvgWriter {
 public:
  SvgWriter(double xmin, double ymin, double xmax, double ymax);

  void polyline(const std::vector<Point>& pts, const std::string& stroke, double width,
                bool closed = false);
  void circle(Point center, double radius, const std::string& stroke, double width);
  /// Circular arc (ccw from theta0 to theta1) around a center.
  void arc(Point center, double radius, double theta0, double theta1, const std::string& stroke,
           double width);
  void segment(Point a, Point b, const std::string& stroke, double width);
  void curve(const SmoothClosedCurve& c, const std::string& stroke, double width,
             int samples = 256);

  std::string str() const;
  void write(const std::string& path) const;

 private:
  double xmin_, ymin_, xmax_, ymax_;
  std::vector<std::string> elements_;
};

}  // namespace erbm
