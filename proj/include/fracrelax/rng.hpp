#pragma once

// Seeded generator with a fixed mapping to doubles, so draws are the same
// on every standard library: MT19937-64, u = (r >> 11) * 2^-53.

#include <cstdint>
#include <random>

namespace fracrelax {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fracrelax
