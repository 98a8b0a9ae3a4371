#include "fp/eval_point.hpp"

#include <cmath>

namespace fp {

EvalPoint::EvalPoint(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw Error("EvalPoint: x and y must have the same dimension");
  }
  if (x_.size() < 2) {
    throw Error("EvalPoint: dimension must be at least 2");
  }
  bool all_zero = true;
  for (double v : y_) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) {
    throw Error("EvalPoint: y must not be the zero vector (slit bundle)");
  }
}

double EvalPoint::coord(int v) const {
  const int n = dim();
  if (v < 0 || v >= 2 * n) {
    throw Error("EvalPoint: coordinate index out of range");
  }
  return v < n ? x_[v] : y_[v - n];
}

double EvalPoint::y_norm() const {
  double s = 0.0;
  for (double v : y_) s += v * v;
  return std::sqrt(s);
}

}  // namespace fp
