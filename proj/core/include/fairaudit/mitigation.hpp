#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/fpdp.hpp"

namespace fairaudit {

/// One mitigated model variant with its fairness and performance profile.
/// The fair flag summarizes the four headline tests (predictive equality is
/// computed and reported but kept out of the flag unless asked for).
struct MitigationRow {
  std::string strategy;  // "fix(<feature>=<value>)" or "drop(<feature>)"
  std::string feature;
  std::string value;  // fix-value rows only
  bool reestimated = false;

  double p_sp = 1.0;
  double p_csp = 1.0;
  double p_eop = 1.0;
  double p_eo = 1.0;
  double p_pe = 1.0;
  double auc_score = 0.0;
  double pcc_score = 0.0;
  bool fair = false;

  std::string prediction_digest;  // sha256 of the label vector
};

/// Overwrites the feature with the value for every row, re-predicts with the
/// unchanged model, and measures the fairness suite plus AUC / PCC against
/// the true outcomes. Statistics agree bit-for-bit with the matching sweep
/// grid point, both run through run_fairness_test on the same labels.
MitigationRow mitigate_fix_value(const FpdpContext& ctx, const std::string& feature,
                                 const std::string& value, double alpha,
                                 bool fair_includes_pe = false);

/// Removes the feature's encoded columns, retrains the frozen hyperparameter
/// preset on the reduced matrix, and audits the retrained model. The seed
/// only matters for presets with feature subsampling.
MitigationRow mitigate_reestimate(const TreeHyperparams& preset,
                                  const FpdpContext& ctx,
                                  const std::string& drop_feature, double alpha,
                                  std::uint64_t seed,
                                  bool fair_includes_pe = false);

/// Re-estimation variant for logistic scorers, retraining at the same
/// penalty.
MitigationRow mitigate_reestimate_logistic(double lambda, const FpdpContext& ctx,
                                           const std::string& drop_feature,
                                           double alpha,
                                           bool fair_includes_pe = false);

struct TradeoffTable {
  std::vector<MitigationRow> rows;  // AUC descending, PCC then label on ties
  /// Groups of row indices sharing an identical prediction vector.
  std::vector<std::vector<std::size_t>> equivalence_classes;
};

TradeoffTable tradeoff_table(std::vector<MitigationRow> rows);

std::string tradeoff_to_csv(const TradeoffTable& table);
std::string tradeoff_to_json(const TradeoffTable& table);

}  // namespace fairaudit
