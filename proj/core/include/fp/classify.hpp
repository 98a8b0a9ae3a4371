#pragma once

#include <string>
#include <vector>

#include "fp/frame_sampler.hpp"
#include "fp/identities.hpp"

namespace fp {

struct ConditionResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ClassRecord {
  std::string class_name;  // FP-Landsberg, FP-Berwald, FP-Minkowskian, FP-Riemannian
  std::vector<ConditionResult> conditions;
  std::string verdict;     // holds | fails | undetermined
  std::vector<std::string> notes;
};

/// Sample-based membership decision for the special frame classes, plus
/// cross-class consistency flags and side observations (such as whether the
/// metric itself is position-only even when the frame is not).
struct Classification {
  std::vector<ClassRecord> classes;
  bool inclusion_consistent = true;
  std::vector<ConditionResult> extras;
  std::vector<std::string> notes;

  const ClassRecord* find(const std::string& class_name) const;
  bool holds(const std::string& class_name) const;
};

struct ClassifyOptions {
  double tolerance = 1e-7;   // scale-relative verdict tolerance
  bool natural_chart = false;
  int min_y_per_x = 3;       // required y-multiplicity per x for probes
};

/// Classifies the frame at the samples. The samples must carry at least
/// min_y_per_x distinct directions per position (grouped sampling);
/// position/direction dependence is probed with first derivatives and
/// cross-direction variation, certified in the supplied chart only.
Classification classify(FrameSampler& sampler, const ClassifyOptions& options = {});

/// Per-cell checks of the torsion/curvature tables of one special class
/// ("FP-Berwald", "FP-Minkowskian", "FP-Riemannian"). The class hypothesis
/// is verified first; chart-dependent cells are skipped unless the chart is
/// declared natural.
std::vector<IdentityResidual> verify_special_tables(FrameSampler& sampler,
                                                    const std::string& class_name,
                                                    const ClassifyOptions& options = {});

}  // namespace fp
