#pragma once

#include <functional>

#include "fp/eval_point.hpp"
#include "fp/multi_index.hpp"

namespace fp {

using ScalarField = std::function<double(const EvalPoint&)>;

/// Central finite-difference estimate of a mixed partial derivative with
/// one Richardson extrapolation step per differentiation level. This is the
/// independent cross-check for the jet engine; it never touches jet
/// arithmetic.
///
/// idx is a multi-index over the 2n chart variables with total degree <= 4.
/// h <= 0 selects a per-order default step (see fd_default_step). Throws
/// when the stencil could leave the y != 0 region.
double fd_derivative(const ScalarField& f, const EvalPoint& point,
                     const MultiIndex& idx, double h = 0.0);

/// Step recommendation balancing truncation against round-off for a
/// derivative of the given total order. Order 1 is the cube root of machine
/// epsilon scaled by the coordinate magnitude; higher orders widen the step
/// as eps^(1/(4+order)) since round-off grows like eps / h^order.
double fd_default_step(int order, double coordinate_magnitude);

}  // namespace fp
