#pragma once

// Deterministic instance generators. The same seed yields the same instance
// on every platform: uniform draws are mapped from raw 64-bit engine output
// by hand instead of through the standard distributions.

#include <cstdint>
#include <random>

#include "bilin/model.hpp"

namespace bilin {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  // Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

// k points in the unit square with pairwise squared distance at least d^2
// and the x-coordinates ordered; random linear objective. 2k variables,
// k(k-1)/2 distance rows, k-1 ordering rows.
Miqcp pointpack(int k, std::uint64_t seed);

// Pooling-style block in which x_a <= x_b only follows from aggregating
// three rows, with x_a * x_b in the objective and in one constraint.
Miqcp ordering_instance(std::uint64_t seed);

struct RandomParams {
  int n = 4;
  int m = 2;
  double density = 0.5;  // probability of each off-diagonal product per row
  int integers = 0;      // leading variables declared integer
  std::uint64_t seed = 1;
};

// Bounded MIQCP whose rows hold at a random interior point with slack.
Miqcp random_miqcp(const RandomParams& params);

}  // namespace bilin
