#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fp/frame_sampler.hpp"

namespace fp {

/// Result of checking one structural identity over a sample set.
struct IdentityResidual {
  std::string name;
  /// Scale-relative residual: max |lhs - rhs| / (1 + max magnitude of the
  /// tensors involved), unless the identity is registered as absolute.
  double residual = 0.0;
  /// The largest-magnitude componentwise difference with its sign, so a
  /// systematic sign mismatch is visible rather than absorbed.
  double signed_residual = 0.0;
  double tolerance = 0.0;
  long samples = 0;
  bool pass = false;
  std::optional<std::string> skipped_reason;
};

struct IdentityOptions {
  /// Overrides the per-identity default tolerance when set.
  std::optional<double> tolerance;
  /// Declares the supplied chart natural (Minkowskian table checks); the
  /// frame document flag is OR-ed with this.
  bool natural_chart = false;
};

/// Names of every registered identity, in registry order.
std::vector<std::string> identity_names();
bool identity_known(const std::string& name);

/// Evaluates both sides of the named identity at every sample. Unknown
/// names throw Error. Identities whose hypotheses fail on this frame come
/// back skipped with a reason instead of failing.
IdentityResidual identity_check(FrameSampler& sampler, const std::string& name,
                                const IdentityOptions& options = {});

/// One-shot variant building its own evaluation cache.
IdentityResidual identity_check(const Frame& frame, const std::string& name,
                                std::span<const EvalPoint> samples,
                                const IdentityOptions& options = {});

/// Runs the whole registry (or the named subset, when filter is non-empty).
std::vector<IdentityResidual> run_identities(FrameSampler& sampler,
                                             const std::vector<std::string>& filter = {},
                                             const IdentityOptions& options = {});

/// Residual bookkeeping shared by the identity implementations: tracks the
/// worst |lhs - rhs|, its sign, and the magnitude scale of the operands.
class ResidualAccumulator {
 public:
  void add(double lhs, double rhs);
  void add_zero(double lhs) { add(lhs, 0.0); }
  void add_grids(const JetGrid& lhs, const JetGrid& rhs);
  void add_grid_zero(const JetGrid& lhs);
  void scale_hint(double magnitude);

  double relative() const { return max_diff_ / (1.0 + max_scale_); }
  double raw() const { return max_diff_; }
  double signed_max() const { return signed_diff_; }

 private:
  double max_diff_ = 0.0;
  double signed_diff_ = 0.0;
  double max_scale_ = 0.0;
};

}  // namespace fp
