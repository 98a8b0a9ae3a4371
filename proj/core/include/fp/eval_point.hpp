#pragma once

#include <vector>

#include "fp/errors.hpp"

namespace fp {

/// A point (x, y) of the slit tangent bundle: n position coordinates and
/// n direction coordinates with y != 0. Objects of the theory are smooth
/// only away from the zero section, so the constructor enforces the slit.
class EvalPoint {
 public:
  EvalPoint(std::vector<double> x, std::vector<double> y);

  int dim() const noexcept { return static_cast<int>(x_.size()); }

  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& y() const noexcept { return y_; }

  /// Flat coordinate access over the 2n chart variables: v in [0, n) maps
  /// to x^{v+1}, v in [n, 2n) to y^{v-n+1}.
  double coord(int v) const;

  /// Euclidean norm of the direction part.
  double y_norm() const;

  bool operator==(const EvalPoint& other) const = default;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

}  // namespace fp
