#pragma once

#include <cstdint>
#include <random>

namespace locnoise {

/// Platform-stable random source.
///
/// std::mt19937_64 has a sequence fixed by the standard; the distributions in
/// <random> do not, so floats are derived here from the top 53 bits of each
/// draw. Equal seeds give bit-identical sequences on every conforming
/// implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace locnoise
