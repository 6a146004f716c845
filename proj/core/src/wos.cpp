#include <cmath>

#include "erbm/errors.hpp"
#include "erbm/sampler.hpp"

namespace erbm {

WosExit wos_exit(const Domain& domain, Point z, double epsilon_abs, PathRng& rng,
                 long max_steps) {
  const int ncomp = domain.component_count();
  for (long step = 0; step < max_steps; ++step) {
    double best = std::numeric_limits<double>::infinity();
    int best_comp = 0;
    double best_t = 0;
    for (int c = 0; c < ncomp; ++c) {
      auto cp = domain.component(c).closest_point(z);
      if (cp.distance < best) {
        best = cp.distance;
        best_comp = c;
        best_t = cp.t;
      }
    }
    if (best < epsilon_abs) {
      return {best_comp, best_t, domain.component(best_comp).point(best_t), step};
    }
    z += best * std::polar(1.0, kTwoPi * rng.uniform());
  }
  throw Error(ErrorCode::MaxStepsExceeded, "walk-on-spheres exceeded the step budget");
}

}  // namespace erbm
