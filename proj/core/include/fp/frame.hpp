#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fp/eval_point.hpp"
#include "fp/frame_document.hpp"
#include "fp/tensor.hpp"

namespace fp {

/// A bound frame field: the parsed document plus evaluation of the frame
/// components as jets. Pure and immutable; safe to share across threads.
class Frame {
 public:
  explicit Frame(FrameDocument doc);

  int n() const noexcept { return doc_.n; }
  const FrameDocument& document() const noexcept { return doc_; }

  /// Jets of the frame components at a point: grid [i][alpha] with mesh row
  /// i and world column alpha. No invertibility check happens here.
  JetGrid lambda_jets(const EvalPoint& point, int order) const;

 private:
  FrameDocument doc_;
};

struct ValidationCondition {
  std::string condition;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationTolerances {
  double determinant = 1e-10;        // |det lambda| floor
  double homogeneity = 1e-9;         // Euler residual of the frame
  double total_symmetry = 1e-9;      // vertical metric derivative symmetry
  double metric_euler = 1e-9;        // y^mu d/dy_alpha g_mu_nu
  double positive_definite = 1e-10;  // leading principal minor floor
};

/// Sample-based validity report. Validity is always "at the tested points
/// within tolerance", never global.
struct ValidationReport {
  std::vector<ValidationCondition> conditions;
  bool gap_valid = false;      // invertibility
  bool lagrange_valid = false; // + metric Euler identity
  bool finsler_valid = false;  // + total symmetry, homogeneity, positivity
  std::vector<std::string> warnings;

  const ValidationCondition* find(const std::string& name) const;
};

/// Frame matrix values at a point (jets retained internally by the
/// evaluation pipeline). Throws SingularError naming the point when
/// |det| falls below the determinant floor.
Tensor frame_matrix(const Frame& frame, const EvalPoint& point, int order = 1);

/// Coframe: the transposed inverse, rows again indexed by the mesh leg.
Tensor coframe_matrix(const Frame& frame, const EvalPoint& point);

/// The frame metric g_mn = sum_i coframe_i_m coframe_i_n and its inverse
/// g^mn = sum_i frame_i^m frame_i^n.
Tensor metric(const Frame& frame, const EvalPoint& point);
Tensor inverse_metric(const Frame& frame, const EvalPoint& point);

/// L = g_mn y^m y^n and F = sqrt(L).
double lagrangian(const Frame& frame, const EvalPoint& point);
double finsler_function(const Frame& frame, const EvalPoint& point);

/// Evaluates the structure conditions at every sample and aggregates the
/// worst residuals. Failures are report entries, not errors.
ValidationReport validate_structure(const Frame& frame,
                                    std::span<const EvalPoint> samples,
                                    const ValidationTolerances& tol = {});

/// Synthesizes a frame document from a symmetric positive-definite metric
/// given as an n x n grid of expression strings: the coframe rows are the
/// transposed lower-triangular factor of g, built symbolically, so the
/// produced document reproduces g wherever g is positive definite.
/// Probe points default to a fixed deterministic sample set.
FrameDocument frame_from_metric(const std::vector<std::vector<std::string>>& g_exprs,
                                int n, const std::string& name = "synthesized",
                                std::span<const EvalPoint> probes = {});

}  // namespace fp
