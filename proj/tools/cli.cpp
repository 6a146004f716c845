#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "erbm/constants.hpp"
#include "erbm/diagnostics.hpp"
#include "erbm/domain_io.hpp"
#include "erbm/errors.hpp"
#include "erbm/level_curve.hpp"
#include "erbm/maps.hpp"
#include "erbm/report.hpp"
#include "erbm/sampler.hpp"
#include "erbm/svg.hpp"

namespace erbm::cli {

namespace {

struct CommonOpts {
  std::string domain_file;
  std::string output_dir;
  int nodes = 256;
  double collar = 0.5;
  uint64_t seed = 20240901;
  long paths = 100000;
  int workers = 0;
  double tol = 1.0;
  bool no_timestamp = false;
};

const char* kBuiltinDisk = "outer circle 0 0 1\n";
const char* kBuiltinAnnulus =
    "outer circle 0 0 1\n"
    "hole circle 0 0 0.25\n";
const char* kBuiltinTwoHole =
    "outer circle 0 0 1\n"
    "hole circle -0.45 0 0.18\n"
    "hole circle 0.45 0 0.18\n";

Domain load_domain(const CommonOpts& opts) {
  if (opts.domain_file.empty()) {
    throw Error(ErrorCode::ParseError, "missing --domain FILE");
  }
  return parse_domain_file(opts.domain_file, opts.nodes);
}

Point parse_point(const std::string& text) {
  std::istringstream is(text);
  double x, y;
  char comma;
  if (!(is >> x >> comma >> y) || comma != ',') {
    throw Error(ErrorCode::ParseError, "expected \"x,y\" but got '" + text + "'");
  }
  return {x, y};
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  if (opts.output_dir.empty()) return name;
  std::filesystem::create_directories(opts.output_dir);
  return (std::filesystem::path(opts.output_dir) / name).string();
}

void echo_inputs(Report& report, const CommonOpts& opts, const Domain& domain) {
  report.section("inputs");
  report.add("domain", opts.domain_file.empty() ? "<builtin>" : opts.domain_file, "input");
  report.add("holes", static_cast<long>(domain.hole_count()), "input");
  report.add("nodes", static_cast<long>(opts.nodes), "input");
  report.add("collar_factor", opts.collar, "input");
}

void finish_report(Report& report, const CommonOpts& opts,
                   std::chrono::steady_clock::time_point t0) {
  if (!opts.no_timestamp) {
    report.section("timing");
    auto now = std::chrono::system_clock::now();
    report.add("timestamp",
               static_cast<long>(
                   std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
                       .count()),
               "unix seconds");
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.add("elapsed_seconds", elapsed, "wall clock");
  }
  report.print(std::cout);
}

void write_field_csv(const std::string& path, const HarmonicField& field, const Domain& domain,
                     int res) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << "x,y,value\n";
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : domain.outer().sample_polygon()) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  double margin = 2e-3 * domain.diameter();
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      Point z(xmin + (xmax - xmin) * (i + 0.5) / res, ymin + (ymax - ymin) * (j + 0.5) / res);
      if (!domain.contains(z)) continue;
      if (domain.closest_boundary(z).distance < margin) continue;
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g\n", z.real(), z.imag(), field.value(z));
      out << buf;
    }
  }
}

void write_map_csv(const std::string& path, const AnalyticMapField& map, const Domain& domain,
                   int res, std::optional<Point> skip = {}, double skip_radius = 0) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << "x,y,u,v\n";
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : domain.outer().sample_polygon()) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  double margin = 5e-3 * domain.diameter();
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      Point z(xmin + (xmax - xmin) * (i + 0.5) / res, ymin + (ymax - ymin) * (j + 0.5) / res);
      if (!domain.contains(z)) continue;
      if (domain.closest_boundary(z).distance < margin) continue;
      if (skip && std::abs(z - *skip) < skip_radius) continue;
      Point f = map.evaluate(z);
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g\n", z.real(), z.imag(), f.real(),
                    f.imag());
      out << buf;
    }
  }
}

SvgWriter domain_svg(const Domain& domain) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : domain.outer().sample_polygon()) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  double pad = 0.05 * (xmax - xmin);
  SvgWriter svg(xmin - pad, ymin - pad, xmax + pad, ymax + pad);
  svg.curve(domain.outer(), "black", 0.004 * (xmax - xmin));
  for (int i = 1; i <= domain.hole_count(); ++i) {
    svg.curve(domain.component(i), "black", 0.004 * (xmax - xmin));
  }
  return svg;
}

// ---------------------------------------------------------------------------

void cmd_pk(const CommonOpts& opts, const std::string& z_text, double t_w, int grid) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  Point z = parse_point(z_text);
  auto solver = make_solver(domain);
  if (!domain.contains(z)) throw Error(ErrorCode::InvalidArgument, "z is not interior");

  PoissonKernelField field(solver, {0, t_w});
  Report report;
  echo_inputs(report, opts, domain);
  report.add("z", z_text, "input");
  report.add("w_parameter", t_w, "input");
  report.section("poisson_kernel");
  report.add("H", field.value(z), "solver accuracy ~1e-8");
  auto density = exit_density(solver, z);
  double mass = 0;
  for (int c = 0; c < solver->component_count(); ++c) {
    const auto& cn = solver->component(c);
    for (int j = 0; j < cn.node_count; ++j) {
      mass += density[static_cast<size_t>(c)][static_cast<size_t>(j)] *
              cn.speed[static_cast<size_t>(j)] * cn.h;
    }
  }
  report.add_check("unit_mass", std::abs(mass - 1.0) < 1e-6, std::abs(mass - 1.0), "1e-6");
  if (grid > 0) {
    std::string path = out_path(opts, "pk_grid.csv");
    write_field_csv(path, field, domain, grid);
    report.add("grid_csv", path, "x,y,value");
  }
  finish_report(report, opts, t0);
}

void cmd_er_pk(const CommonOpts& opts, double t_w, int grid) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  auto ws = make_er_workspace(make_solver(domain), opts.collar);
  auto field = std::make_shared<ErField>(er_poisson_kernel(ws, t_w));

  Report report;
  echo_inputs(report, opts, domain);
  report.add("w_parameter", t_w, "input");
  report.section("er_poisson_kernel");
  for (int i = 1; i <= ws->hole_count(); ++i) {
    report.add("c_" + std::to_string(i), field->component_value(i),
               "period solve, cond " + format_double(field->condition()));
  }
  double worst_flux = 0;
  for (int j = 1; j <= ws->hole_count(); ++j) {
    auto eta = collar_curve(domain, j, std::min(0.5 * opts.collar + 0.18, 0.9));
    worst_flux = std::max(worst_flux, std::abs(flux(*field, eta.curve, 512)));
  }
  if (ws->hole_count() > 0) {
    report.add_check("er_flux_condition", worst_flux < 1e-6, worst_flux, "1e-6");
  }
  if (grid > 0) {
    std::string path = out_path(opts, "er_pk_grid.csv");
    write_field_csv(path, *field, domain, grid);
    report.add("grid_csv", path, "x,y,value");
  }
  finish_report(report, opts, t0);
}

void cmd_green(const CommonOpts& opts, const std::string& z_text, bool er, int grid) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  Point pole = parse_point(z_text);
  auto solver = make_solver(domain);

  Report report;
  echo_inputs(report, opts, domain);
  report.add("pole", z_text, "input");

  if (!er) {
    auto g = greens_function(solver, pole);
    report.section("green");
    double max_trace = 0;
    for (int c = 0; c < solver->component_count(); ++c) {
      for (int m = 0; m < 64; ++m) {
        max_trace = std::max(max_trace, std::abs(g.boundary_trace(c, kTwoPi * m / 64)));
      }
    }
    report.add_check("zero_boundary_trace", max_trace < 1e-8, max_trace, "1e-8");
    Point other = pole + 0.15 * domain.diameter() * Point(0.62, 0.45);
    if (domain.contains(other) &&
        domain.closest_boundary(other).distance > 2e-4 * domain.diameter()) {
      auto g2 = greens_function(solver, other);
      double sym = std::abs(g.value(other) - g2.value(pole));
      report.add_check("symmetry_residual", sym < 1e-6, sym, "1e-6");
    }
    if (grid > 0) {
      std::string path = out_path(opts, "green_grid.csv");
      write_field_csv(path, g, domain, grid);
      report.add("grid_csv", path, "x,y,value");
    }
  } else {
    auto ws = make_er_workspace(solver, opts.collar);
    auto g = er_green(ws, pole);
    report.section("er_green");
    for (int i = 1; i <= ws->hole_count(); ++i) {
      report.add("c_" + std::to_string(i), g.component_value(i),
                 "period solve, cond " + format_double(g.condition()));
    }
    double max_trace = 0;
    for (int m = 0; m < 64; ++m) {
      max_trace = std::max(max_trace, std::abs(g.boundary_trace(0, kTwoPi * m / 64)));
    }
    report.add_check("zero_outer_trace", max_trace < 1e-6, max_trace, "1e-6");
    double worst_flux = 0;
    for (int j = 1; j <= ws->hole_count(); ++j) {
      auto eta = collar_curve(domain, j, std::min(0.5 * opts.collar + 0.18, 0.9));
      if (eta.curve.winding_number(pole) != 0) continue;  // pole-free collars only
      worst_flux = std::max(worst_flux, std::abs(flux(g, eta.curve, 512)));
    }
    if (ws->hole_count() > 0) {
      report.add_check("er_flux_condition", worst_flux < 1e-6, worst_flux, "1e-6");
    }
    double src = flux(
        g, SmoothClosedCurve::circle(pole, 0.5 * domain.closest_boundary(pole).distance), 512);
    report.add_check("source_flux", std::abs(src + 2.0) < 1e-4, std::abs(src + 2.0), "1e-4");
    if (grid > 0) {
      std::string path = out_path(opts, "er_green_grid.csv");
      write_field_csv(path, g, domain, grid);
      report.add("grid_csv", path, "x,y,value");
    }
  }
  finish_report(report, opts, t0);
}

void cmd_chain(const CommonOpts& opts) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  if (domain.hole_count() < 1) {
    throw Error(ErrorCode::InvalidArgument, "chain requires at least one hole");
  }
  auto ws = make_er_workspace(make_solver(domain), opts.collar);
  auto chain = boundary_chain(ws);

  Report report;
  echo_inputs(report, opts, domain);
  report.section("boundary_chain");
  const int n = domain.hole_count();
  for (int i = 0; i < n; ++i) {
    std::ostringstream qrow, prow;
    for (int k = 0; k <= n; ++k) {
      if (k) qrow << " ";
      if (k) prow << " ";
      qrow << format_double(chain.q(i, k));
      prow << format_double(chain.p_tilde(i, k));
    }
    report.add("q_row_" + std::to_string(i + 1), qrow.str(),
               "columns: outer, hole 1..n; quadrature ~1e-8");
    report.add("p_tilde_row_" + std::to_string(i + 1), prow.str(), "collar-independent");
  }
  report.add("collar_factor_stamp", chain.collar_factor, "q depends on it, p_tilde does not");
  report.add("hole_block_spectral_radius", chain.hole_block_spectral_radius, "< 1 required");
  double row_dev = std::max(std::abs(chain.q.rowwise().sum().maxCoeff() - 1.0),
                            std::abs(chain.q.rowwise().sum().minCoeff() - 1.0));
  report.add_check("rows_sum_to_one", row_dev < 1e-10, row_dev, "1e-10");
  finish_report(report, opts, t0);
}

void cmd_map_chordal(const CommonOpts& opts, double t_w, int grid) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  auto ws = make_er_workspace(make_solver(domain), opts.collar);
  auto result = chordal_map(ws, t_w);

  Report report;
  echo_inputs(report, opts, domain);
  report.add("w_parameter", t_w, "input");
  report.section("chordal_map");
  for (const auto& slit : result.slits.slits) {
    std::string tag = std::to_string(slit.hole_index);
    report.add("slit_" + tag + "_height", slit.height, "= H_er(A_i, w)");
    report.add("slit_" + tag + "_x_min", slit.x_min, "golden section 1e-10");
    report.add("slit_" + tag + "_x_max", slit.x_max, "golden section 1e-10");
    report.add("slit_" + tag + "_flatness_std",
               result.slit_flatness[static_cast<size_t>(slit.hole_index - 1)], "tol 1e-6");
  }
  report.add("plateau_degeneracy", result.slits.plateau_degeneracy ? "yes" : "no",
             "reported, not resolved");
  report.add("injectivity_min_separation", result.injectivity_min_separation,
             "smoke test, 100 random pairs");

  auto svg = domain_svg(domain);
  svg.write(out_path(opts, "chordal_domain.svg"));
  double xlo = -1, xhi = 1, ytop = 0.2;
  for (const auto& s : result.slits.slits) {
    xlo = std::min(xlo, s.x_min - 0.2);
    xhi = std::max(xhi, s.x_max + 0.2);
    ytop = std::max(ytop, 1.6 * s.height);
  }
  SvgWriter image(xlo, -0.1 * ytop, xhi, ytop);
  image.segment({xlo, 0}, {xhi, 0}, "black", 0.004 * (xhi - xlo));
  for (const auto& s : result.slits.slits) {
    image.segment({s.x_min, s.height}, {s.x_max, s.height}, "crimson", 0.006 * (xhi - xlo));
  }
  image.write(out_path(opts, "chordal_image.svg"));
  report.add("svg", out_path(opts, "chordal_image.svg"), "image slit domain");

  if (grid > 0) {
    std::string path = out_path(opts, "chordal_map.csv");
    write_map_csv(path, *result.map, domain, grid, result.w, 2 * kMapRefusalArclength);
    report.add("map_csv", path, "x,y,u,v");
  }
  finish_report(report, opts, t0);
}

void cmd_map_bilateral(const CommonOpts& opts, int hole, int grid) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  auto ws = make_er_workspace(make_solver(domain), opts.collar);
  auto result = bilateral_map(ws, hole);

  Report report;
  echo_inputs(report, opts, domain);
  report.add("source_hole", static_cast<long>(hole), "input");
  report.section("bilateral_map");
  report.add("inner_radius", result.ring.inner_radius, "tol 1e-5 on canonical domains");
  for (const auto& arc : result.ring.arcs) {
    std::string tag = std::to_string(arc.hole_index);
    report.add("arc_" + tag + "_radius", arc.radius, "= exp(-pi c_j)");
    report.add("arc_" + tag + "_theta_min", arc.theta_min, "golden section 1e-10");
    report.add("arc_" + tag + "_theta_max", arc.theta_max, "golden section 1e-10");
  }
  report.add_check("conjugate_period_source",
                   std::abs(result.conjugate_period_source + kTwoPi) < 1e-4,
                   std::abs(result.conjugate_period_source + kTwoPi), "1e-4");
  double worst_other = 0;
  for (double p : result.conjugate_period_others) {
    worst_other = std::max(worst_other, std::abs(p));
  }
  if (!result.conjugate_period_others.empty()) {
    report.add_check("conjugate_period_others", worst_other < 1e-4, worst_other, "1e-4");
  }
  report.add_check("boundary_modulus", result.boundary_modulus_deviation < 1e-5,
                   result.boundary_modulus_deviation, "1e-5");

  auto svg = domain_svg(domain);
  svg.write(out_path(opts, "bilateral_domain.svg"));
  SvgWriter image(-1.1, -1.1, 1.1, 1.1);
  image.circle({0, 0}, 1.0, "black", 0.006);
  image.circle({0, 0}, result.ring.inner_radius, "black", 0.006);
  for (const auto& arc : result.ring.arcs) {
    image.arc({0, 0}, arc.radius, arc.theta_min, arc.theta_max, "crimson", 0.009);
  }
  image.write(out_path(opts, "bilateral_image.svg"));
  report.add("svg", out_path(opts, "bilateral_image.svg"), "image slit ring");

  if (grid > 0) {
    std::string path = out_path(opts, "bilateral_map.csv");
    write_map_csv(path, *result.map, domain, grid);
    report.add("map_csv", path, "x,y,u,v");
  }
  finish_report(report, opts, t0);
}

void cmd_map_radial(const CommonOpts& opts, const std::string& z_text, int grid) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  Point z0 = parse_point(z_text);
  auto ws = make_er_workspace(make_solver(domain), opts.collar);
  auto result = radial_map(ws, z0);

  Report report;
  echo_inputs(report, opts, domain);
  report.add("z0", z_text, "input");
  report.section("radial_map");
  for (const auto& arc : result.disk.arcs) {
    std::string tag = std::to_string(arc.hole_index);
    report.add("arc_" + tag + "_radius", arc.radius, "= exp(-pi c_j)");
    report.add("arc_" + tag + "_theta_min", arc.theta_min, "golden section 1e-10");
    report.add("arc_" + tag + "_theta_max", arc.theta_max, "golden section 1e-10");
  }
  report.add_check("origin_modulus", result.origin_modulus < 1e-6, result.origin_modulus, "1e-6");
  report.add_check("boundary_modulus", result.boundary_modulus_deviation < 1e-5,
                   result.boundary_modulus_deviation, "1e-5");

  auto svg = domain_svg(domain);
  svg.write(out_path(opts, "radial_domain.svg"));
  SvgWriter image(-1.1, -1.1, 1.1, 1.1);
  image.circle({0, 0}, 1.0, "black", 0.006);
  image.circle({0, 0}, 0.004, "black", 0.004);
  for (const auto& arc : result.disk.arcs) {
    image.arc({0, 0}, arc.radius, arc.theta_min, arc.theta_max, "crimson", 0.009);
  }
  image.write(out_path(opts, "radial_image.svg"));
  report.add("svg", out_path(opts, "radial_image.svg"), "image slit disk");

  if (grid > 0) {
    std::string path = out_path(opts, "radial_map.csv");
    write_map_csv(path, *result.map, domain, grid, z0, 0.02 * domain.diameter());
    report.add("map_csv", path, "x,y,u,v");
  }
  finish_report(report, opts, t0);
}

void cmd_trace(const CommonOpts& opts, std::optional<double> t_w, std::optional<int> hole,
               std::optional<std::string> z_text, double level) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  auto ws = make_er_workspace(make_solver(domain), opts.collar);

  std::shared_ptr<const HarmonicField> field;
  TraceOptions trace_opts;
  trace_opts.diameter = domain.diameter();
  trace_opts.domain = &domain;
  Point start_hint(0, 0);
  std::string kind;

  if (t_w) {
    auto f = std::make_shared<ErField>(er_poisson_kernel(ws, *t_w));
    for (int i = 1; i <= ws->hole_count(); ++i) {
      trace_opts.plateau_values.push_back(f->component_value(i));
    }
    Point w = domain.outer().point(*t_w);
    trace_opts.terminal = w;
    Point nu = domain.outer().normal_enclosed(*t_w);
    auto start_opt =
        find_level_on_ray(*f, level, w + nu * (0.01 * domain.diameter()), nu,
                          0.95 * domain.diameter(), domain);
    if (!start_opt) throw Error(ErrorCode::PlateauLevel, "no level crossing found on the ray");
    start_hint = *start_opt;
    field = f;
    kind = "er_poisson_kernel";
  } else if (hole) {
    auto f = std::make_shared<ErField>(er_green_component(ws, *hole));
    auto sum = std::make_shared<FieldSum>();
    sum->add(kPi, f);
    for (int i = 1; i <= ws->hole_count(); ++i) {
      trace_opts.plateau_values.push_back(kPi * f->component_value(i));
    }
    const auto& hole_curve = domain.component(*hole);
    Point a = offset_point(hole_curve, 0.0, 0.05 * domain.clearance(*hole));
    auto start_opt = find_level_on_ray(*sum, level, a, hole_curve.normal_away(0.0),
                                       0.95 * domain.diameter(), domain);
    if (!start_opt) throw Error(ErrorCode::PlateauLevel, "no level crossing found on the ray");
    start_hint = *start_opt;
    field = sum;
    kind = "pi_er_green_component";
  } else if (z_text) {
    Point z0 = parse_point(*z_text);
    auto f = std::make_shared<ErField>(er_green(ws, z0));
    auto sum = std::make_shared<FieldSum>();
    sum->add(kPi, f);
    for (int i = 1; i <= ws->hole_count(); ++i) {
      trace_opts.plateau_values.push_back(kPi * f->component_value(i));
    }
    double d = domain.closest_boundary(z0).distance;
    auto start_opt = find_level_on_ray(*sum, level, z0 + Point(0.02 * d, 0), Point(1, 0),
                                       0.95 * domain.diameter(), domain);
    if (!start_opt) throw Error(ErrorCode::PlateauLevel, "no level crossing found on the ray");
    start_hint = *start_opt;
    field = sum;
    kind = "pi_er_green";
  } else {
    throw Error(ErrorCode::ParseError, "trace needs one of --w, --hole, --z");
  }

  auto curve = trace_level_curve(*field, level, start_hint, trace_opts);

  Report report;
  echo_inputs(report, opts, domain);
  report.section("trace");
  report.add("field", kind, "input");
  report.add("level", level, "input");
  report.add("points", static_cast<long>(curve.points.size()), "trace resolution");
  report.add_check("closure_gap", curve.closure_gap < 1e-6 * domain.diameter(),
                   curve.closure_gap, "1e-6 * diameter");
  report.add_check("simple", curve.simple, curve.simple ? 1.0 : 0.0, "no self-intersection");
  report.add("through_terminal", curve.through_terminal ? "yes" : "no", "");

  std::string csv = out_path(opts, "level_curve.csv");
  {
    std::ofstream out(csv);
    out << "x,y\n";
    for (Point p : curve.points) {
      char buf[80];
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", p.real(), p.imag());
      out << buf;
    }
  }
  report.add("curve_csv", csv, "x,y");
  auto svg = domain_svg(domain);
  svg.polyline(curve.points, "crimson", 0.004 * domain.diameter());
  svg.write(out_path(opts, "level_curve.svg"));
  report.add("svg", out_path(opts, "level_curve.svg"), "domain + level curve");
  finish_report(report, opts, t0);
}

void cmd_sample(const CommonOpts& opts, std::optional<std::string> z_text,
                std::optional<int> hole, int bins) {
  auto t0 = std::chrono::steady_clock::now();
  Domain domain = load_domain(opts);
  auto solver = make_solver(domain);
  auto ws = make_er_workspace(solver, opts.collar);

  ErStart start = Point(0, 0);
  std::string start_text;
  if (hole) {
    start = *hole;
    start_text = "hole " + std::to_string(*hole);
  } else if (z_text) {
    start = parse_point(*z_text);
    start_text = *z_text;
  } else {
    throw Error(ErrorCode::ParseError, "sample needs --z or --hole");
  }

  RunConfig cfg;
  cfg.seed = opts.seed;
  cfg.path_count = opts.paths;
  cfg.worker_count = opts.workers;
  cfg.collar_factor = opts.collar;
  ErbmSampler sampler(solver, cfg);
  auto cmp = estimate_exit_distribution(sampler, ws, start, bins);

  Report report;
  echo_inputs(report, opts, domain);
  report.add("start", start_text, "input");
  report.add("paths", opts.paths, "input");
  report.add("seed", static_cast<long>(opts.seed), "input");
  report.add("bins", static_cast<long>(bins), "input");
  report.section("exit_distribution");
  report.add_check("tv_vs_er_harmonic_measure", cmp.tv < 0.02, cmp.tv, "0.02 at 1e5 paths");
  for (int b = 0; b < bins; ++b) {
    double p_emp = static_cast<double>(cmp.empirical.counts[static_cast<size_t>(b)]) /
                   std::max<long>(cmp.empirical.total, 1);
    double se = std::sqrt(std::max(p_emp * (1 - p_emp), 1e-12) /
                          std::max<long>(cmp.empirical.total, 1));
    report.add("bin_" + std::to_string(b),
               format_double(p_emp) + " vs " +
                   format_double(cmp.deterministic[static_cast<size_t>(b)]),
               "se " + format_double(se));
  }

  if (domain.hole_count() >= 1) {
    auto chain = boundary_chain(ws);
    auto est = sampler.estimate_chain(std::max<long>(opts.paths / 2, 1000));
    report.section("chain");
    double worst = 0;
    for (int i = 0; i < domain.hole_count(); ++i) {
      for (int k = 0; k <= domain.hole_count(); ++k) {
        double dev = std::abs(est.q(i, k) - chain.q(i, k));
        double se = std::max(est.q_se(i, k), 1e-9);
        worst = std::max(worst, dev / se);
      }
    }
    report.add_check("chain_within_3se", worst < 3.0, worst, "3 standard errors");
  }

  std::string csv = out_path(opts, "exit_histogram.csv");
  {
    std::ofstream out(csv);
    out << "bin_lo,bin_hi,count,deterministic_mass\n";
    for (int b = 0; b < bins; ++b) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%ld,%.10g\n",
                    cmp.empirical.edges[static_cast<size_t>(b)],
                    cmp.empirical.edges[static_cast<size_t>(b) + 1],
                    cmp.empirical.counts[static_cast<size_t>(b)],
                    cmp.deterministic[static_cast<size_t>(b)]);
      out << buf;
    }
  }
  report.add("histogram_csv", csv, "per-bin counts");
  finish_report(report, opts, t0);
}

void validate_suite(const std::string& name, const Domain& domain, const CommonOpts& opts,
                    Report& report) {
  const double T = opts.tol;
  report.section("validate " + name);
  auto solver = make_solver(domain);

  // geometry
  bool winding_ok = true;
  for (int i = 1; i <= domain.hole_count(); ++i) {
    winding_ok = winding_ok && domain.outer().winding_number(domain.component(i).center()) == 1;
    for (int j = 1; j <= domain.hole_count(); ++j) {
      if (i != j) {
        winding_ok = winding_ok &&
                     domain.component(j).winding_number(domain.component(i).center()) == 0;
      }
    }
  }
  report.add_check("geometry.winding", winding_ok, winding_ok ? 0.0 : 1.0, "exact");
  double frame = 0;
  for (int c = 0; c < domain.component_count(); ++c) {
    for (int m = 0; m < 32; ++m) {
      double t = kTwoPi * m / 32;
      frame = std::max(frame, std::abs(dot(domain.component(c).unit_tangent(t),
                                           domain.component(c).normal_enclosed(t))));
    }
  }
  report.add_check("geometry.orthonormal_frame", frame < 1e-12 * T, frame, "1e-12");

  // bm_kernels
  auto ones = solve_dirichlet(solver, [](int, double, Point) { return 1.0; });
  double const_dev = 0;
  for (Point z : {Point(0.31, 0.17), Point(-0.4, 0.33)}) {
    if (domain.contains(z)) const_dev = std::max(const_dev, std::abs(ones.value(z) - 1.0));
  }
  report.add_check("kernels.constant_solve", const_dev < 1e-10 * T, const_dev, "1e-10");

  Point pa(0.52, 0.21), pb(-0.33, -0.42);
  if (domain.contains(pa) && domain.contains(pb)) {
    auto ga = greens_function(solver, pa);
    auto gb = greens_function(solver, pb);
    double sym = std::abs(ga.value(pb) - gb.value(pa));
    report.add_check("kernels.green_symmetry", sym < 1e-6 * T, sym, "1e-6");
  }
  {
    Point z(0.52, 0.21);
    if (!domain.contains(z)) z = Point(0, 0);
    auto density = exit_density(solver, z);
    double mass = 0;
    for (int c = 0; c < solver->component_count(); ++c) {
      const auto& cn = solver->component(c);
      for (int j = 0; j < cn.node_count; ++j) {
        mass += density[static_cast<size_t>(c)][static_cast<size_t>(j)] *
                cn.speed[static_cast<size_t>(j)] * cn.h;
      }
    }
    report.add_check("kernels.pk_unit_mass", std::abs(mass - 1) < 1e-6 * T, std::abs(mass - 1),
                     "1e-6");
  }

  if (domain.hole_count() > 0) {
    auto ws4 = make_er_workspace(solver, 0.4);
    auto ws6 = make_er_workspace(solver, 0.6);
    report.add_check("erbm.period_symmetry", ws4->period().symmetry_residual < 1e-6 * T,
                     ws4->period().symmetry_residual, "1e-6");
    report.add_check("erbm.period_negative_eigenvalues",
                     ws4->period().eigenvalues.maxCoeff() < 0,
                     ws4->period().eigenvalues.maxCoeff(), "< 0");
    auto f4 = solve_er_harmonic(ws4, [](double t) { return std::sin(t); });
    auto f6 = solve_er_harmonic(ws6, [](double t) { return std::sin(t); });
    double cdev = 0, fluxdev = 0;
    for (int i = 1; i <= domain.hole_count(); ++i) {
      cdev = std::max(cdev, std::abs(f4.component_value(i) - f6.component_value(i)));
      auto eta = collar_curve(domain, i, 0.52);
      fluxdev = std::max(fluxdev, std::abs(flux(f4, eta.curve, 512)));
    }
    report.add_check("erbm.collar_independent_constants", cdev < 1e-5 * T, cdev, "1e-5");
    report.add_check("erbm.flux_condition", fluxdev < 1e-6 * T, fluxdev, "1e-6");
    auto c4 = boundary_chain(ws4);
    auto c6 = boundary_chain(ws6);
    double pdev = (c4.p_tilde - c6.p_tilde).cwiseAbs().maxCoeff();
    report.add_check("erbm.collar_independent_p_tilde", pdev < 1e-4 * T, pdev, "1e-4");

    auto bm = bilateral_map(ws4, 1);
    report.add_check("slitmap.boundary_modulus", bm.boundary_modulus_deviation < 1e-5 * T,
                     bm.boundary_modulus_deviation, "1e-5");
    report.add_check("slitmap.conjugate_period",
                     std::abs(bm.conjugate_period_source + kTwoPi) < 1e-4 * T,
                     std::abs(bm.conjugate_period_source + kTwoPi), "1e-4");
  } else {
    auto ws = make_er_workspace(solver, opts.collar);
    auto rm = radial_map(ws, {0, 0});
    double dev = 0;
    for (Point z : {Point(0.3, 0.1), Point(-0.5, 0.4)}) {
      dev = std::max(dev, std::abs(std::abs(rm.map->evaluate(z)) - std::abs(z)));
    }
    report.add_check("slitmap.radial_identity", dev < 1e-5 * T, dev, "1e-5");
  }

  {
    auto ws = make_er_workspace(solver, opts.collar);
    RunConfig cfg;
    cfg.seed = opts.seed;
    cfg.path_count = 4000;
    cfg.worker_count = opts.workers;
    cfg.collar_factor = opts.collar;
    ErbmSampler sampler(solver, cfg);
    ErStart start = domain.hole_count() > 0 ? ErStart(1) : ErStart(Point(0.4, 0.1));
    auto cmp = estimate_exit_distribution(sampler, ws, start, 8);
    report.add_check("sampler.tv_smoke", cmp.tv < 0.06, cmp.tv, "0.06 at 4e3 paths");
    auto again = sampler.exit_distribution(start, 8);
    bool identical = again.counts == cmp.empirical.counts;
    report.add_check("sampler.deterministic", identical, identical ? 0.0 : 1.0, "exact");
  }
}

void cmd_validate(const CommonOpts& opts) {
  auto t0 = std::chrono::steady_clock::now();
  Report report;
  if (!opts.domain_file.empty()) {
    Domain domain = load_domain(opts);
    echo_inputs(report, opts, domain);
    validate_suite(opts.domain_file, domain, opts, report);
  } else {
    report.section("inputs");
    report.add("domain", "<three bundled domains>", "input");
    validate_suite("disk", parse_domain_string(kBuiltinDisk, opts.nodes), opts, report);
    validate_suite("annulus", parse_domain_string(kBuiltinAnnulus, opts.nodes), opts, report);
    validate_suite("twohole", parse_domain_string(kBuiltinTwoHole, opts.nodes), opts, report);
  }
  report.section("summary");
  report.add("failed_checks", static_cast<long>(report.failed_checks()), "");
  finish_report(report, opts, t0);
  if (!report.all_checks_passed()) {
    throw Error(ErrorCode::SolverSingular, "validation failed");
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"excursion-reflected Brownian motion: kernels, slit maps, sampler"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--domain", opts.domain_file, "domain spec file");
    cmd->add_option("--output", opts.output_dir, "output directory for CSV/SVG");
    cmd->add_option("--nodes", opts.nodes, "collocation nodes per curve")->default_val(256);
    cmd->add_option("--collar", opts.collar, "collar factor in (0,1)")->default_val(0.5);
    cmd->add_option("--seed", opts.seed, "RNG seed")->default_val(20240901);
    cmd->add_option("--paths", opts.paths, "Monte Carlo path count")->default_val(100000);
    cmd->add_option("--workers", opts.workers, "worker threads (0 = hardware)")->default_val(0);
    cmd->add_option("--tol", opts.tol, "validation tolerance scale")->default_val(1.0);
    cmd->add_flag("--no-timestamp", opts.no_timestamp, "omit timestamp/timing lines");
  };

  std::string z_text;
  double t_w = 0, level = 0;
  int hole = 1, bins = 16, grid = 0;

  auto* pk = app.add_subcommand("pk", "Poisson kernel H(z, w)");
  add_common(pk);
  pk->add_option("--z", z_text, "interior point \"x,y\"")->required();
  pk->add_option("--w", t_w, "boundary parameter on the outer curve")->required();
  pk->add_option("--grid", grid, "CSV grid resolution");

  auto* erpk = app.add_subcommand("er-pk", "ER Poisson kernel H_er(., w)");
  add_common(erpk);
  erpk->add_option("--w", t_w, "boundary parameter on the outer curve")->required();
  erpk->add_option("--grid", grid, "CSV grid resolution");

  auto* green = app.add_subcommand("green", "Green's function with pole z");
  add_common(green);
  green->add_option("--z", z_text, "pole \"x,y\"")->required();
  green->add_option("--grid", grid, "CSV grid resolution");

  auto* ergreen = app.add_subcommand("er-green", "ER Green's function with pole z");
  add_common(ergreen);
  ergreen->add_option("--z", z_text, "pole \"x,y\"")->required();
  ergreen->add_option("--grid", grid, "CSV grid resolution");

  auto* chain = app.add_subcommand("chain", "ER boundary Markov chain");
  add_common(chain);

  auto* mc = app.add_subcommand("map-chordal", "chordal slit map");
  add_common(mc);
  mc->add_option("--w", t_w, "boundary parameter of the pole point")->required();
  mc->add_option("--grid", grid, "CSV grid resolution");

  auto* mb = app.add_subcommand("map-bilateral", "circular slit ring map");
  add_common(mb);
  mb->add_option("--hole", hole, "source hole index (1-based)")->required();
  mb->add_option("--grid", grid, "CSV grid resolution");

  auto* mr = app.add_subcommand("map-radial", "circular slit disk map");
  add_common(mr);
  mr->add_option("--z", z_text, "map origin \"x,y\"")->required();
  mr->add_option("--grid", grid, "CSV grid resolution");

  auto* trace = app.add_subcommand("trace", "level-curve tracing");
  add_common(trace);
  auto* trace_w = trace->add_option("--w", t_w, "trace H_er(., w) level curves");
  auto* trace_hole = trace->add_option("--hole", hole, "trace pi G_er(A_i, .) level curves");
  auto* trace_z = trace->add_option("--z", z_text, "trace pi G_er(z, .) level curves");
  trace->add_option("--level", level, "level r")->required();

  auto* sample = app.add_subcommand("sample", "ERBM Monte Carlo sampling");
  add_common(sample);
  auto* sample_z = sample->add_option("--z", z_text, "interior start \"x,y\"");
  auto* sample_hole = sample->add_option("--hole", hole, "hole start (1-based)");
  sample->add_option("--bins", bins, "exit histogram bins")->default_val(16);

  auto* validate = app.add_subcommand("validate", "run the invariant suites");
  add_common(validate);

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (pk->parsed()) {
      cmd_pk(opts, z_text, t_w, grid);
    } else if (erpk->parsed()) {
      cmd_er_pk(opts, t_w, grid);
    } else if (green->parsed()) {
      cmd_green(opts, z_text, false, grid);
    } else if (ergreen->parsed()) {
      cmd_green(opts, z_text, true, grid);
    } else if (chain->parsed()) {
      cmd_chain(opts);
    } else if (mc->parsed()) {
      cmd_map_chordal(opts, t_w, grid);
    } else if (mb->parsed()) {
      cmd_map_bilateral(opts, hole, grid);
    } else if (mr->parsed()) {
      cmd_map_radial(opts, z_text, grid);
    } else if (trace->parsed()) {
      cmd_trace(opts, trace_w->count() ? std::optional<double>(t_w) : std::nullopt,
                trace_hole->count() ? std::optional<int>(hole) : std::nullopt,
                trace_z->count() ? std::optional<std::string>(z_text) : std::nullopt, level);
    } else if (sample->parsed()) {
      cmd_sample(opts, sample_z->count() ? std::optional<std::string>(z_text) : std::nullopt,
                 sample_hole->count() ? std::optional<int>(hole) : std::nullopt, bins);
    } else if (validate->parsed()) {
      cmd_validate(opts);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace erbm::cli
