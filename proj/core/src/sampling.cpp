#include "fp/sampling.hpp"

#include <cmath>

namespace fp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

namespace {

std::vector<double> sample_x(int n, Rng& rng, const SampleOptions& opts) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = rng.uniform(-opts.x_half_width, opts.x_half_width);
  }
  return x;
}

std::vector<double> sample_y(int n, Rng& rng, const SampleOptions& opts) {
  while (true) {
    std::vector<double> y(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      y[static_cast<std::size_t>(i)] = rng.uniform(-opts.shell_max, opts.shell_max);
      norm2 += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    const double norm = std::sqrt(norm2);
    if (norm < opts.shell_min || norm > opts.shell_max) continue;
    bool near_axis = false;
    for (int i = 0; i < n; ++i) {
      if (std::fabs(y[static_cast<std::size_t>(i)]) < opts.axis_cone * norm) {
        near_axis = true;
        break;
      }
    }
    if (near_axis) continue;
    return y;
  }
}

}  // namespace

std::vector<EvalPoint> sample_points(int n, Rng& rng, const SampleOptions& opts) {
  std::vector<EvalPoint> pts;
  pts.reserve(static_cast<std::size_t>(opts.count));
  for (int k = 0; k < opts.count; ++k) {
    pts.emplace_back(sample_x(n, rng, opts), sample_y(n, rng, opts));
  }
  return pts;
}

std::vector<EvalPoint> sample_grouped_points(int n, int groups, int y_per_x, Rng& rng,
                                             const SampleOptions& opts) {
  std::vector<EvalPoint> pts;
  pts.reserve(static_cast<std::size_t>(groups) * static_cast<std::size_t>(y_per_x));
  for (int g = 0; g < groups; ++g) {
    const std::vector<double> x = sample_x(n, rng, opts);
    for (int k = 0; k < y_per_x; ++k) {
      pts.emplace_back(x, sample_y(n, rng, opts));
    }
  }
  return pts;
}

}  // namespace fp
