#include "erbm/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "erbm/errors.hpp"

namespace erbm {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

SvgWriter::SvgWriter(double xmin, double ymin, double xmax, double ymax)
    : xmin_(xmin), ymin_(ymin), xmax_(xmax), ymax_(ymax) {}

void SvgWriter::polyline(const std::vector<Point>& pts, const std::string& stroke, double width,
                         bool closed) {
  std::ostringstream os;
  os << "<path d=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    os << (i == 0 ? "M" : "L") << fmt(pts[i].real()) << " " << fmt(-pts[i].imag());
  }
  if (closed) os << "Z";
  os << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(width) << "\"/>";
  elements_.push_back(os.str());
}

void SvgWriter::circle(Point center, double radius, const std::string& stroke, double width) {
  std::ostringstream os;
  os << "<circle cx=\"" << fmt(center.real()) << "\" cy=\"" << fmt(-center.imag()) << "\" r=\""
     << fmt(radius) << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
     << fmt(width) << "\"/>";
  elements_.push_back(os.str());
}

void SvgWriter::arc(Point center, double radius, double theta0, double theta1,
                    const std::string& stroke, double width) {
  std::vector<Point> pts;
  int n = 64;
  for (int i = 0; i <= n; ++i) {
    double th = theta0 + (theta1 - theta0) * i / n;
    pts.push_back(center + radius * std::polar(1.0, th));
  }
  polyline(pts, stroke, width);
}

void SvgWriter::segment(Point a, Point b, const std::string& stroke, double width) {
  polyline({a, b}, stroke, width);
}

void SvgWriter::curve(const SmoothClosedCurve& c, const std::string& stroke, double width,
                      int samples) {
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) pts.push_back(c.point(kTwoPi * i / samples));
  polyline(pts, stroke, width);
}

std::string SvgWriter::str() const {
  std::ostringstream os;
  double w = xmax_ - xmin_, h = ymax_ - ymin_;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(xmin_) << " "
     << fmt(-ymax_) << " " << fmt(w) << " " << fmt(h) << "\">\n";
  for (const auto& e : elements_) os << "  " << e << "\n";
  os << "</svg>\n";
  return os.str();
}

void SvgWriter::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
  out << str();
}

}  // namespace erbm
