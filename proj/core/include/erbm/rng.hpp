#pragma once

#include <cstdint>
#include <random>

namespace erbm {

/// SplitMix64 combiner: derives independent, machine-independent stream seeds
/// from (seed, stream index).
inline uint64_t splitmix_combine(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-path random stream. Uniform doubles are produced from the top 53 bits
/// of mt19937_64 directly, so results do not depend on the standard library's
/// distribution implementations.
class PathRng {
 public:
  PathRng(uint64_t seed, uint64_t stream) : engine_(splitmix_combine(seed, stream)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace erbm
