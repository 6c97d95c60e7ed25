#pragma once

#include <span>
#include <string>
#include <vector>

#include "fairaudit/fairness.hpp"

namespace fairaudit {

/// Everything a sweep needs: the trained model, the encoded sample it was
/// audited on, the aligned outcomes / group labels, and the frozen risk
/// classes. Risk classes never change during a sweep; only the model input
/// is perturbed.
struct FpdpContext {
  const Classifier& model;
  const EncodedMatrix& x;
  std::span<const int> y;
  std::span<const int> d;
  std::span<const int> classes;
  double delta = 0.5;
  double alpha = 0.10;
};

struct FpdpPoint {
  std::string value;     // level code, or the numeric value as text
  double numeric_value = 0.0;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool degenerate = false;
};

struct FpdpCurve {
  std::string feature;
  Hypothesis hypothesis = Hypothesis::SP;
  std::vector<FpdpPoint> grid;
  double baseline_p_value = 1.0;
  double alpha = 0.10;
  bool baseline_rejected = false;  // informational when false
};

struct CandidateVerdict {
  std::string feature;
  bool is_candidate = false;
  std::vector<std::string> witness_values;  // grid values with p > alpha
};

/// Sets the feature to each of its levels for every row (the level's one-hot
/// column to 1, its siblings to 0), re-predicts with the unchanged model and
/// re-runs the hypothesis test per level.
FpdpCurve fpdp_categorical(const FpdpContext& ctx, const std::string& feature,
                           Hypothesis hypothesis);

/// Same sweep over an explicit numeric grid. An empty grid is an error;
/// `fpdp_sweep` fills in the default grid of sorted distinct observed values.
FpdpCurve fpdp_continuous(const FpdpContext& ctx, const std::string& feature,
                          Hypothesis hypothesis, std::span<const double> grid);

/// Dispatches on the feature's encoded shape with the default grid.
FpdpCurve fpdp_sweep(const FpdpContext& ctx, const std::string& feature,
                     Hypothesis hypothesis);

/// Sorted distinct observed values of an encoded numeric column.
std::vector<double> default_grid(const EncodedMatrix& x, const std::string& feature);

/// Uniformly spaced grid over the observed [min, max] of the feature.
std::vector<double> uniform_grid(const EncodedMatrix& x, const std::string& feature,
                                 std::size_t points);

/// One verdict per feature: a feature is a candidate when at least one sweep
/// value no longer rejects the hypothesis at the curve's level.
std::vector<CandidateVerdict> candidate_variables(
    const FpdpContext& ctx, Hypothesis hypothesis,
    std::span<const std::string> features);

/// Original features the model consumes, via the encoded column groups.
std::vector<std::string> features_consumed(const Classifier& model,
                                           const EncodedMatrix& x);

std::string curve_to_csv(const FpdpCurve& curve);
std::string curves_index_json(const std::vector<FpdpCurve>& curves,
                              const std::vector<CandidateVerdict>& verdicts);

}  // namespace fairaudit
