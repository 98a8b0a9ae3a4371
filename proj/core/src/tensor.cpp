#include "fp/tensor.hpp"

#include <cmath>

namespace fp {

std::string to_string(Variance v) {
  switch (v) {
    case Variance::Upper: return "upper";
    case Variance::Lower: return "lower";
    case Variance::Mesh: return "mesh";
  }
  return "?";
}

namespace {

std::size_t pow_n(int n, int rank) {
  std::size_t s = 1;
  for (int i = 0; i < rank; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

std::size_t flat_offset(int n, int rank, std::initializer_list<int> idx) {
  if (static_cast<int>(idx.size()) != rank) {
    throw Error("tensor: wrong number of indices");
  }
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= n) throw Error("tensor: index out of range");
    off = off * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  }
  return off;
}

}  // namespace

JetGrid::JetGrid(int n, std::vector<Variance> variances)
    : n_(n), variances_(std::move(variances)),
      v_(pow_n(n, static_cast<int>(variances_.size()))) {}

std::size_t JetGrid::offset(std::initializer_list<int> idx) const {
  return flat_offset(n_, rank(), idx);
}

double JetGrid::max_abs_value() const {
  double worst = 0.0;
  for (const Jet& j : v_) worst = std::max(worst, std::fabs(j.value()));
  return worst;
}

double JetGrid::max_abs_coefficient() const {
  double worst = 0.0;
  for (const Jet& j : v_) {
    if (j.valid()) worst = std::max(worst, j.max_abs_coefficient());
  }
  return worst;
}

double max_value_difference(const JetGrid& a, const JetGrid& b) {
  if (a.n() != b.n() || a.rank() != b.rank()) {
    throw Error("tensor: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.flat().size(); ++k) {
    worst = std::max(worst, std::fabs(a.flat()[k].value() - b.flat()[k].value()));
  }
  return worst;
}

Tensor::Tensor(int n, std::vector<Variance> variances)
    : n_(n), variances_(std::move(variances)),
      v_(pow_n(n, static_cast<int>(variances_.size())), 0.0) {}

std::size_t Tensor::offset(std::initializer_list<int> idx) const {
  return flat_offset(n_, rank(), idx);
}

double Tensor::max_abs() const {
  double worst = 0.0;
  for (double x : v_) worst = std::max(worst, std::fabs(x));
  return worst;
}

Tensor values_of(const JetGrid& grid) {
  Tensor t(grid.n(), grid.variances());
  for (std::size_t k = 0; k < grid.flat().size(); ++k) {
    t.components()[k] = grid.flat()[k].value();
  }
  return t;
}

}  // namespace fp
