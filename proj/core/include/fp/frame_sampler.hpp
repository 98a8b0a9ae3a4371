#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "fp/frame.hpp"
#include "fp/geometry.hpp"
#include "fp/torsion_curvature.hpp"

namespace fp {

/// One frame plus one sample set, with lazily built per-point evaluation
/// contexts shared across every check that runs on the same samples. The
/// torsion and curvature sets per connection kind and the validation report
/// are cached too, since many checks revisit them.
class FrameSampler {
 public:
  FrameSampler(Frame frame, std::vector<EvalPoint> points, int order = 4);

  const Frame& frame() const noexcept { return frame_; }
  std::span<const EvalPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  int order() const noexcept { return order_; }

  const GeometryContext& context(std::size_t i);
  const TorsionSet& torsions(std::size_t i, ConnectionKind kind);
  const CurvatureSet& curvatures(std::size_t i, ConnectionKind kind);
  const ValidationReport& validation();

 private:
  Frame frame_;
  std::vector<EvalPoint> points_;
  int order_;
  std::vector<std::optional<GeometryContext>> contexts_;
  std::vector<std::array<std::optional<TorsionSet>, 4>> torsions_;
  std::vector<std::array<std::optional<CurvatureSet>, 4>> curvatures_;
  std::optional<ValidationReport> validation_;
};

}  // namespace fp
