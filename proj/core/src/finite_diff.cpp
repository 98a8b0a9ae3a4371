#include "fp/finite_diff.hpp"

#include <cmath>
#include <limits>

#include "fp/errors.hpp"

namespace fp {

namespace {

EvalPoint displaced(const EvalPoint& p, int var, double step) {
  std::vector<double> x = p.x();
  std::vector<double> y = p.y();
  const int n = p.dim();
  if (var < n) {
    x[static_cast<std::size_t>(var)] += step;
  } else {
    y[static_cast<std::size_t>(var - n)] += step;
  }
  return EvalPoint(std::move(x), std::move(y));
}

// Recursive nested central differences: strip one derivative level at a
// time, Richardson-extrapolating each level from steps h and h/2.
double fd_recursive(const ScalarField& f, const EvalPoint& p,
                    MultiIndex idx, double h) {
  const int n_vars = idx.n_vars();
  int var = -1;
  for (int v = 0; v < n_vars; ++v) {
    if (idx[v] > 0) {
      var = v;
      break;
    }
  }
  if (var < 0) return f(p);
  idx.bump(var, -1);

  auto level = [&](double step) {
    const double fwd = fd_recursive(f, displaced(p, var, step), idx, h);
    const double bwd = fd_recursive(f, displaced(p, var, -step), idx, h);
    return (fwd - bwd) / (2.0 * step);
  };
  const double coarse = level(h);
  const double fine = level(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

double fd_default_step(int order, double coordinate_magnitude) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = 1.0 + std::fabs(coordinate_magnitude);
  if (order <= 1) return std::cbrt(eps) * scale;
  return std::pow(eps, 1.0 / (4.0 + order)) * scale;
}

double fd_derivative(const ScalarField& f, const EvalPoint& point,
                     const MultiIndex& idx, double h) {
  const int n = point.dim();
  if (idx.n_vars() != 2 * n) {
    throw Error("fd_derivative: multi-index does not match the point dimension");
  }
  const int order = idx.degree();
  if (order > 4) throw Error("fd_derivative: total degree above 4 unsupported");
  if (h <= 0.0) {
    double mag = 0.0;
    for (int v = 0; v < 2 * n; ++v) {
      if (idx[v] > 0) mag = std::max(mag, std::fabs(point.coord(v)));
    }
    h = fd_default_step(order, mag);
  }

  // The stencil displaces each differentiated y-variable by at most
  // idx[v] * h; refuse when the box comes within rounding distance of the
  // zero section.
  double min_norm2 = 0.0;
  double norm2 = 0.0;
  for (int v = 0; v < n; ++v) {
    const double yv = std::fabs(point.y()[static_cast<std::size_t>(v)]);
    const double reach = idx[n + v] * h;
    const double closest = std::max(0.0, yv - reach);
    min_norm2 += closest * closest;
    norm2 += yv * yv;
  }
  if (std::sqrt(min_norm2) <= 1e-8 * (1.0 + std::sqrt(norm2))) {
    throw Error("fd_derivative: stencil could leave the y != 0 region");
  }

  return fd_recursive(f, point, idx, h);
}

}  // namespace fp
