#pragma once

#include <span>
#include <string>
#include <vector>

#include "fp/frame.hpp"
#include "fp/identities.hpp"

namespace fp {

/// A change of position coordinates x -> x'(x), given by n expressions in
/// the x variables only. Directions transform with the Jacobian.
struct ChartMap {
  int n = 0;
  std::vector<ExprPtr> exprs;

  static ChartMap from_strings(const std::vector<std::string>& texts, int n);
  /// Uses the chart_map block of a frame document.
  static ChartMap from_document(const FrameDocument& doc);
};

/// Verifies the transformation law of the nonlinear connection under the
/// chart map: the Barthel connection recomputed from scratch on the
/// transformed frame (via exact jet composition with the locally inverted
/// chart) must match the law
///
///   N'^a_b = p^a_c N^c_d (p^{-1})^d_b + p^a_m (d^2 x^m / dx'_b dx'_s) y'^s
///
/// applied to the original connection. Throws SingularError when the chart
/// Jacobian degenerates at a sample.
IdentityResidual chart_transform_check(const Frame& frame, const ChartMap& chart,
                                       std::span<const EvalPoint> samples,
                                       double tolerance = 1e-7);

}  // namespace fp
