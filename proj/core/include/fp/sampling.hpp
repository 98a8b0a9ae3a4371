#pragma once

#include <cstdint>
#include <vector>

#include "fp/eval_point.hpp"

namespace fp {

/// xoshiro256** seeded through splitmix64: small, fast, and the stream is
/// fully determined by the seed, so reports are reproducible run to run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform double in [0, 1) built from the top 53 bits.
  double next_unit();
  double uniform(double lo, double hi);

 private:
  std::uint64_t s_[4];
};

struct SampleOptions {
  int count = 100;
  double x_half_width = 1.0;    // x uniform in [-w, w]^n
  double shell_min = 0.5;       // |y| shell
  double shell_max = 2.0;
  double axis_cone = 1e-3;      // reject y with a component below cone * |y|
};

/// Random evaluation points: x uniform in the box, y uniform in the annulus
/// with a safety cone around the coordinate hyperplanes (abs/sqrt frames are
/// singular there).
std::vector<EvalPoint> sample_points(int n, Rng& rng, const SampleOptions& opts = {});

/// Points grouped for dependence probes: groups x-values, each carrying
/// y_per_x distinct directions. Consecutive entries share x.
std::vector<EvalPoint> sample_grouped_points(int n, int groups, int y_per_x, Rng& rng,
                                             const SampleOptions& opts = {});

}  // namespace fp
