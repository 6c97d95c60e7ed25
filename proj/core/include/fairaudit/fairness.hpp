#pragma once

#include <span>
#include <string>
#include <vector>

#include "fairaudit/models.hpp"
#include "fairaudit/stats.hpp"

namespace fairaudit {

enum class Hypothesis { SP, CSP, EO, EOP, PE };

const char* hypothesis_tag(Hypothesis h);
const char* hypothesis_name(Hypothesis h);

struct StratumResult {
  std::string label;
  ContingencyStratum counts;
  ChiSquareResult chi2;
};

/// Outcome of one independence test. The global statistic is the sum of the
/// non-degenerate per-stratum statistics and the global dof counts those
/// strata; a report with dof 0 is fully degenerate and never rejects.
struct FairnessReport {
  Hypothesis hypothesis = Hypothesis::SP;
  std::vector<StratumResult> per_stratum;
  double global_statistic = 0.0;
  int global_dof = 0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;

  // Advisory aggregation views over the per-stratum decisions, reported
  // alongside the formal summed statistic.
  bool any_stratum_rejects = false;
  bool majority_of_strata_reject = false;
};

FairnessReport test_statistical_parity(std::span<const int> yhat,
                                       std::span<const int> d, double alpha);

FairnessReport test_conditional_parity(std::span<const int> yhat,
                                       std::span<const int> d,
                                       std::span<const int> classes, double alpha);

FairnessReport test_equal_odds(std::span<const int> yhat, std::span<const int> y,
                               std::span<const int> d, double alpha);

FairnessReport test_equal_opportunity(std::span<const int> yhat,
                                      std::span<const int> y,
                                      std::span<const int> d, double alpha);

FairnessReport test_predictive_equality(std::span<const int> yhat,
                                        std::span<const int> y,
                                        std::span<const int> d, double alpha);

/// One entry point used by the audit, the sweeps and the mitigation rows, so
/// the three paths produce bit-identical statistics for the same labels.
FairnessReport run_fairness_test(Hypothesis h, std::span<const int> yhat,
                                 std::span<const int> y, std::span<const int> d,
                                 std::span<const int> classes, double alpha);

/// Predicts once at the given threshold and runs all five tests.
struct AuditResult {
  std::vector<int> yhat;
  std::vector<FairnessReport> reports;  // SP, CSP, EO, EOP, PE

  const FairnessReport& report(Hypothesis h) const;
};

AuditResult audit(const Classifier& model, const EncodedMatrix& x,
                  std::span<const int> y, std::span<const int> d, double delta,
                  double alpha, std::span<const int> classes);

/// JSON document keyed by hypothesis tag, with per-stratum counts and
/// statistics.
std::string audit_to_json(const AuditResult& audit);

/// CSV summary, one row per hypothesis with conditional per-class rows
/// in between (statistic, dof, p-value, decision).
std::string audit_to_csv(const AuditResult& audit);

}  // namespace fairaudit
