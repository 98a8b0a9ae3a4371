#include "fp/frame_sampler.hpp"

namespace fp {

FrameSampler::FrameSampler(Frame frame, std::vector<EvalPoint> points, int order)
    : frame_(std::move(frame)), points_(std::move(points)), order_(order),
      contexts_(points_.size()), torsions_(points_.size()), curvatures_(points_.size()) {
  if (points_.empty()) throw Error("FrameSampler: at least one sample required");
}

const GeometryContext& FrameSampler::context(std::size_t i) {
  auto& slot = contexts_.at(i);
  if (!slot) slot.emplace(frame_, points_[i], order_);
  return *slot;
}

const TorsionSet& FrameSampler::torsions(std::size_t i, ConnectionKind kind) {
  auto& slot = torsions_.at(i)[static_cast<std::size_t>(kind)];
  if (!slot) slot = fp::torsions(context(i), kind);
  return *slot;
}

const CurvatureSet& FrameSampler::curvatures(std::size_t i, ConnectionKind kind) {
  auto& slot = curvatures_.at(i)[static_cast<std::size_t>(kind)];
  if (!slot) slot = fp::curvatures(context(i), kind);
  return *slot;
}

const ValidationReport& FrameSampler::validation() {
  if (!validation_) validation_ = validate_structure(frame_, points_);
  return *validation_;
}

}  // namespace fp
