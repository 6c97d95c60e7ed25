#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairaudit/dataset.hpp"

namespace fairaudit {

/// Partition of the sample into homogeneous risk classes over the mixed
/// numeric / categorical feature columns (target, protected and excluded
/// columns never participate).
struct RiskClassAssignment {
  std::vector<int> labels;  // per-row class in 0..class_count-1
  int class_count = 0;
  double gamma = 0.0;  // categorical-distance weight

  struct Prototype {
    std::vector<double> numeric;       // per numeric feature
    std::vector<std::int32_t> modes;   // per categorical feature
  };
  std::vector<Prototype> prototypes;

  /// Total within-class distance after each assignment step; non-increasing.
  std::vector<double> objective_trace;
};

/// Lloyd-style alternation for mixed data. Distance between a row and a
/// prototype is the squared euclidean distance over the numeric features
/// plus gamma times the number of categorical mismatches. Initial prototypes
/// are `classes` distinct rows sampled from the seed; a class left empty by
/// an assignment step is re-seeded from the point farthest from its
/// prototype. Deterministic in (data, classes, gamma, seed).
///
/// When gamma is not given it defaults to half the mean standard deviation
/// of the numeric feature columns, computed on the data as passed.
RiskClassAssignment kprototypes(const Dataset& d, int classes,
                                std::optional<double> gamma, std::uint64_t seed,
                                int max_iter = 100);

/// Same alternation from explicit initial prototypes.
RiskClassAssignment kprototypes_from_prototypes(
    const Dataset& d, std::vector<RiskClassAssignment::Prototype> initial,
    std::optional<double> gamma, int max_iter = 100);

}  // namespace fairaudit
