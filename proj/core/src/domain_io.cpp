#include "erbm/domain_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "erbm/errors.hpp"

namespace erbm {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, origin + ":" + std::to_string(line) + ": " + msg);
}

double read_real(std::istringstream& is, const std::string& origin, int line,
                 const char* what) {
  double v;
  if (!(is >> v)) fail(origin, line, std::string("expected ") + what);
  return v;
}

SmoothClosedCurve parse_curve(std::istringstream& is, const std::string& origin, int line,
                              int node_count) {
  std::string form;
  if (!(is >> form)) fail(origin, line, "missing curve form");
  try {
    if (form == "circle") {
      double cx = read_real(is, origin, line, "cx");
      double cy = read_real(is, origin, line, "cy");
      double r = read_real(is, origin, line, "r");
      return SmoothClosedCurve::circle({cx, cy}, r, node_count);
    }
    if (form == "ellipse") {
      double cx = read_real(is, origin, line, "cx");
      double cy = read_real(is, origin, line, "cy");
      double a = read_real(is, origin, line, "a");
      double b = read_real(is, origin, line, "b");
      double rot = read_real(is, origin, line, "rot");
      return SmoothClosedCurve::ellipse({cx, cy}, a, b, rot, node_count);
    }
    if (form == "fourier") {
      double cx = read_real(is, origin, line, "cx");
      double cy = read_real(is, origin, line, "cy");
      double kd = read_real(is, origin, line, "K");
      int K = static_cast<int>(kd);
      if (K < 0 || K != kd || K > 4096) fail(origin, line, "invalid mode count K");
      std::vector<Point> coeffs;
      coeffs.reserve(static_cast<size_t>(2 * K + 1));
      for (int k = -K; k <= K; ++k) {
        double re = read_real(is, origin, line, "coefficient re");
        double im = read_real(is, origin, line, "coefficient im");
        coeffs.emplace_back(re, im);
      }
      return SmoothClosedCurve::fourier({cx, cy}, coeffs, node_count);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    fail(origin, line, e.what());
  }
  fail(origin, line, "unknown curve form '" + form + "'");
}

}  // namespace

Domain parse_domain(std::istream& in, const std::string& origin, int node_count) {
  std::optional<SmoothClosedCurve> outer;
  std::vector<SmoothClosedCurve> holes;
  std::vector<int> hole_lines;
  int outer_line = 0;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream is(raw);
    std::string stmt;
    if (!(is >> stmt)) continue;  // blank or comment line
    if (stmt == "outer") {
      if (outer) fail(origin, line, "duplicate outer statement (first at line " +
                                        std::to_string(outer_line) + ")");
      outer = parse_curve(is, origin, line, node_count);
      outer_line = line;
    } else if (stmt == "hole") {
      holes.push_back(parse_curve(is, origin, line, node_count));
      hole_lines.push_back(line);
    } else {
      fail(origin, line, "unknown statement '" + stmt + "'");
    }
    std::string extra;
    if (is >> extra) fail(origin, line, "trailing tokens starting at '" + extra + "'");
  }
  if (!outer) fail(origin, line ? line : 1, "missing outer statement");

  Domain domain(*outer, std::move(holes));
  auto report = domain.validate();
  if (!report.valid()) {
    std::ostringstream os;
    os << origin << ": invalid domain: ";
    for (size_t i = 0; i < report.violations.size(); ++i) {
      const auto& v = report.violations[i];
      if (i) os << "; ";
      os << v.message;
      if (v.hole_a >= 1 && v.hole_a <= static_cast<int>(hole_lines.size())) {
        os << " (line " << hole_lines[static_cast<size_t>(v.hole_a - 1)];
        if (v.hole_b >= 1 && v.hole_b <= static_cast<int>(hole_lines.size())) {
          os << " and line " << hole_lines[static_cast<size_t>(v.hole_b - 1)];
        }
        os << ")";
      }
    }
    throw Error(ErrorCode::ParseError, os.str());
  }
  return domain;
}

Domain parse_domain_file(const std::string& path, int node_count) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  return parse_domain(in, path, node_count);
}

Domain parse_domain_string(const std::string& text, int node_count) {
  std::istringstream in(text);
  return parse_domain(in, "<string>", node_count);
}

namespace {

void format_curve(std::ostream& os, const SmoothClosedCurve& c) {
  const auto& d = c.descriptor();
  os.precision(17);
  switch (d.kind) {
    case CurveKind::Circle:
      os << "circle " << d.center.real() << " " << d.center.imag() << " " << d.radius;
      break;
    case CurveKind::Ellipse:
      os << "ellipse " << d.center.real() << " " << d.center.imag() << " " << d.semi_a << " "
         << d.semi_b << " " << d.rotation;
      break;
    case CurveKind::Fourier: {
      int K = static_cast<int>(d.coeffs.size() / 2);
      os << "fourier " << d.center.real() << " " << d.center.imag() << " " << K;
      for (const auto& p : d.coeffs) os << " " << p.real() << " " << p.imag();
      break;
    }
  }
}

}  // namespace

std::string format_domain(const Domain& domain) {
  std::ostringstream os;
  os << "outer ";
  format_curve(os, domain.outer());
  os << "\n";
  for (const auto& h : domain.holes()) {
    os << "hole ";
    format_curve(os, h);
    os << "\n";
  }
  return os.str();
}

}  // namespace erbm
