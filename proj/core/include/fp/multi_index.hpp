#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "fp/errors.hpp"

namespace fp {

/// A multi-index of partial-derivative exponents over the 2n chart
/// variables (x^1..x^n, y^1..y^n). The total degree is the sum of the
/// exponents.
class MultiIndex {
 public:
  explicit MultiIndex(int n_vars) : e_(static_cast<std::size_t>(n_vars), 0) {
    if (n_vars < 1 || n_vars > kMaxVars) {
      throw Error("MultiIndex: unsupported variable count");
    }
  }

  static MultiIndex of(std::initializer_list<int> exponents);

  int n_vars() const noexcept { return static_cast<int>(e_.size()); }

  int degree() const noexcept {
    int d = 0;
    for (auto v : e_) d += v;
    return d;
  }

  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }

  MultiIndex& bump(int var, int by = 1) {
    e_[static_cast<std::size_t>(var)] =
        static_cast<std::uint8_t>(e_[static_cast<std::size_t>(var)] + by);
    return *this;
  }

  /// Product of per-variable factorials; the normalization between Taylor
  /// coefficients and partial derivatives.
  double factorial() const noexcept;

  /// Packs the exponents into a 64-bit key (4 bits each). Requires every
  /// exponent <= 15 and at most 16 variables.
  std::uint64_t pack() const noexcept;

  bool operator==(const MultiIndex& other) const = default;

  static constexpr int kMaxVars = 16;
  static constexpr int kMaxExponent = 15;

 private:
  std::vector<std::uint8_t> e_;
};

}  // namespace fp
