#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "fp/errors.hpp"
#include "fp/jet.hpp"

namespace fp {

/// Index character of a tensor slot. Mesh indices label the frame legs;
/// they are inert under covariant differentiation and index gymnastics.
enum class Variance { Upper, Lower, Mesh };

std::string to_string(Variance v);

/// Dense multi-index array of jets sharing one dimension n per slot.
/// Rank up to 4 is enough for every object of the theory.
class JetGrid {
 public:
  JetGrid() = default;
  JetGrid(int n, std::vector<Variance> variances);

  int n() const noexcept { return n_; }
  int rank() const noexcept { return static_cast<int>(variances_.size()); }
  const std::vector<Variance>& variances() const noexcept { return variances_; }
  std::vector<Jet>& flat() noexcept { return v_; }
  const std::vector<Jet>& flat() const noexcept { return v_; }

  Jet& at() { return v_.at(0); }
  const Jet& at() const { return v_.at(0); }
  Jet& at(int i) { return v_.at(offset({i})); }
  const Jet& at(int i) const { return v_.at(offset({i})); }
  Jet& at(int i, int j) { return v_.at(offset({i, j})); }
  const Jet& at(int i, int j) const { return v_.at(offset({i, j})); }
  Jet& at(int i, int j, int k) { return v_.at(offset({i, j, k})); }
  const Jet& at(int i, int j, int k) const { return v_.at(offset({i, j, k})); }
  Jet& at(int i, int j, int k, int l) { return v_.at(offset({i, j, k, l})); }
  const Jet& at(int i, int j, int k, int l) const { return v_.at(offset({i, j, k, l})); }

  /// Largest |value| over all components.
  double max_abs_value() const;
  /// Largest |Taylor coefficient| over all components and trusted degrees.
  double max_abs_coefficient() const;

 private:
  std::size_t offset(std::initializer_list<int> idx) const;

  int n_ = 0;
  std::vector<Variance> variances_;
  std::vector<Jet> v_;
};

/// Componentwise a - b over values followed by max |.|; the grids must
/// agree in shape.
double max_value_difference(const JetGrid& a, const JetGrid& b);

/// A tensor of plain values at one evaluation point, with per-index
/// variance markers. This is the reporting type; computation happens on
/// jet grids.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, std::vector<Variance> variances);

  int n() const noexcept { return n_; }
  int rank() const noexcept { return static_cast<int>(variances_.size()); }
  const std::vector<Variance>& variances() const noexcept { return variances_; }
  const std::vector<double>& components() const noexcept { return v_; }
  std::vector<double>& components() noexcept { return v_; }

  double& at(int i) { return v_.at(offset({i})); }
  double at(int i) const { return v_.at(offset({i})); }
  double& at(int i, int j) { return v_.at(offset({i, j})); }
  double at(int i, int j) const { return v_.at(offset({i, j})); }
  double& at(int i, int j, int k) { return v_.at(offset({i, j, k})); }
  double at(int i, int j, int k) const { return v_.at(offset({i, j, k})); }
  double& at(int i, int j, int k, int l) { return v_.at(offset({i, j, k, l})); }
  double at(int i, int j, int k, int l) const { return v_.at(offset({i, j, k, l})); }

  double max_abs() const;

 private:
  std::size_t offset(std::initializer_list<int> idx) const;

  int n_ = 0;
  std::vector<Variance> variances_;
  std::vector<double> v_;
};

/// Values of a jet grid as a Tensor (row-major, same index order).
Tensor values_of(const JetGrid& grid);

}  // namespace fp
