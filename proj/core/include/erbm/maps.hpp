#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "erbm/conjugate.hpp"
#include "erbm/er.hpp"

namespace erbm {

struct ChordalSlit {
  int hole_index = 0;
  double height = 0;  // Im f on the slit = H^{ER}(A_i, w)
  double x_min = 0;
  double x_max = 0;
};

struct ChordalSlitDomain {
  std::vector<ChordalSlit> slits;
  bool plateau_degeneracy = false;  // two heights within 1e-9 with overlapping x-ranges
};

struct CircularArc {
  int hole_index = 0;
  double radius = 0;
  double theta_min = 0;
  double theta_max = 0;
};

struct CircularSlitRing {
  int source_hole = 0;
  double inner_radius = 0;
  std::vector<CircularArc> arcs;  // the holes other than the source
};

struct CircularSlitDisk {
  std::vector<CircularArc> arcs;
};

/// Conformal map evaluator built from one harmonic field and its analytic
/// completion. Chordal form: f = (pinned path integral) + i * field. Exponential
/// form: f = exp(-(scale*field + i * path integral)). Path integrals run from a
/// single anchor along routed polylines; prefix integrals at router waypoints
/// are cached after the first pass.
class AnalyticMapField {
 public:
  struct Refusal {
    Point at;
    double radius;
  };

  static AnalyticMapField chordal(FieldPtr imag_part, std::shared_ptr<const PathRouter> router,
                                  Point anchor, double pinned_real,
                                  std::optional<Refusal> refusal = {});
  static AnalyticMapField exponential(FieldPtr u_part, double scale,
                                      std::shared_ptr<const PathRouter> router, Point anchor);

  /// f(z). Chordal maps refuse evaluation within the refusal radius of w.
  Point evaluate(Point z) const;
  /// The path-integrated part alone: Re f for chordal maps, the conjugate v
  /// for exponential maps.
  double integrated_part(Point z) const;

  bool exponential_form() const { return exp_form_; }
  double field_scale() const { return scale_; }
  const HarmonicField& field() const { return *field_; }
  Point anchor() const { return anchor_; }

 private:
  AnalyticMapField() = default;

  FieldPtr field_;
  std::shared_ptr<const PathRouter> router_;
  Point anchor_;
  double pin_ = 0;
  double scale_ = 1;
  bool exp_form_ = false;
  HarmonicRole role_ = HarmonicRole::Imaginary;
  std::optional<Refusal> refusal_;

  struct Key {
    long long x, y;
    bool operator<(const Key& o) const { return x < o.x || (x == o.x && y < o.y); }
  };
  static Key key_of(Point p);
  struct PrefixCache {
    std::mutex mutex;
    std::map<Key, Point> map;  // waypoint -> integral from anchor
  };
  std::shared_ptr<PrefixCache> cache_ = std::make_shared<PrefixCache>();
};

struct ChordalMapResult {
  std::shared_ptr<const ErField> v_field;  // H^{ER}(., w)
  std::shared_ptr<const AnalyticMapField> map;
  ChordalSlitDomain slits;
  double t_w = 0;
  Point w;
  Point anchor;
  std::vector<double> slit_flatness;       // std of Im f over each hole boundary
  double injectivity_min_separation = 0;   // min |f(a)-f(b)| over 100 random pairs
};

/// Chordal slit map: Im f = H^{ER}(., w), u pinned to 0 at the anchor point
/// opposite w. Evaluation is refused within 1e-2 of w.
ChordalMapResult chordal_map(ErWorkspacePtr ws, double t_w);

struct BilateralMapResult {
  std::shared_ptr<const ErField> g_field;  // G^{ER}(A_i, .)
  std::shared_ptr<const AnalyticMapField> map;
  CircularSlitRing ring;
  int source_hole = 0;
  double boundary_modulus_deviation = 0;   // max | |f|-1 | over outer samples
  double conjugate_period_source = 0;      // should be -2*pi
  std::vector<double> conjugate_period_others;
  std::vector<double> arc_radial_deviation;
};

/// Bilateral slit map f = exp(-(u+iv)) with u = pi * G^{ER}(A_i, .).
BilateralMapResult bilateral_map(ErWorkspacePtr ws, int hole_index);

struct RadialMapResult {
  std::shared_ptr<const ErField> g_field;  // G^{ER}(z0, .)
  std::shared_ptr<const AnalyticMapField> map;
  CircularSlitDisk disk;
  Point z0;
  double boundary_modulus_deviation = 0;
  double origin_modulus = 0;  // Richardson-extrapolated |f| at z0
  std::vector<double> arc_radial_deviation;
};

/// Circular-slit-disk map f = exp(-(u+iv)) with u = pi * G^{ER}(z0, .).
RadialMapResult radial_map(ErWorkspacePtr ws, Point z0);

}  // namespace erbm
