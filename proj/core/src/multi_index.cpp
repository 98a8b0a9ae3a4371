#include "fp/multi_index.hpp"

namespace fp {

MultiIndex MultiIndex::of(std::initializer_list<int> exponents) {
  MultiIndex idx(static_cast<int>(exponents.size()));
  int i = 0;
  for (int e : exponents) {
    if (e < 0 || e > kMaxExponent) {
      throw Error("MultiIndex: exponent out of range");
    }
    idx.bump(i++, e);
  }
  return idx;
}

double MultiIndex::factorial() const noexcept {
  double f = 1.0;
  for (auto v : e_) {
    for (int k = 2; k <= v; ++k) f *= k;
  }
  return f;
}

std::uint64_t MultiIndex::pack() const noexcept {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    key |= static_cast<std::uint64_t>(e_[i] & 0xF) << (4 * i);
  }
  return key;
}

}  // namespace fp
