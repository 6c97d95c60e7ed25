#include "fairaudit/fairness.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairaudit/error.hpp"

namespace fairaudit {

namespace {

FairnessReport from_table(Hypothesis h, const ContingencyTable& table,
                          double alpha) {
  FairnessReport report;
  report.hypothesis = h;
  report.alpha = alpha;

  int rejecting = 0;
  for (const auto& stratum : table.strata) {
    StratumResult sr;
    sr.label = stratum.label;
    sr.counts = stratum;
    sr.chi2 = pearson_chi2_stratum(stratum);
    if (!sr.chi2.degenerate) {
      report.global_statistic += sr.chi2.statistic;
      report.global_dof += sr.chi2.dof;
      if (sr.chi2.p_value < alpha) ++rejecting;
    }
    report.per_stratum.push_back(std::move(sr));
  }
  if (report.global_dof > 0) {
    report.p_value = chi2_sf(report.global_statistic, report.global_dof);
    report.reject = report.p_value < alpha;
  } else {
    report.p_value = 1.0;
    report.reject = false;
  }
  report.any_stratum_rejects = rejecting > 0;
  report.majority_of_strata_reject =
      2 * rejecting > static_cast<int>(report.per_stratum.size());
  return report;
}

void check_binary(std::span<const int> v, const char* what) {
  for (int x : v) {
    if (x != 0 && x != 1) {
      throw DataError(std::string(what) + ": sequence is not binary");
    }
  }
}

std::vector<std::size_t> rows_with(std::span<const int> y, int value) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == value) rows.push_back(i);
  }
  return rows;
}

FairnessReport outcome_stratum_test(Hypothesis h, std::span<const int> yhat,
                                    std::span<const int> y, std::span<const int> d,
                                    int outcome, double alpha) {
  if (yhat.size() != y.size() || yhat.size() != d.size()) {
    throw DataError("fairness test: sequence lengths differ");
  }
  check_binary(yhat, "yhat");
  check_binary(y, "y");
  check_binary(d, "d");
  const std::vector<std::size_t> rows = rows_with(y, outcome);
  if (rows.empty()) {
    throw DataError(std::string(hypothesis_tag(h)) + ": no rows with Y=" +
                    std::to_string(outcome));
  }
  std::vector<int> a, b, s;
  a.reserve(rows.size());
  b.reserve(rows.size());
  s.assign(rows.size(), 0);
  for (std::size_t i : rows) {
    a.push_back(yhat[i]);
    b.push_back(d[i]);
  }
  const std::vector<std::string> names = {"Y=" + std::to_string(outcome)};
  return from_table(h, build_table(a, b, s, names), alpha);
}

}  // namespace

const char* hypothesis_tag(Hypothesis h) {
  switch (h) {
    case Hypothesis::SP: return "SP";
    case Hypothesis::CSP: return "CSP";
    case Hypothesis::EO: return "EO";
    case Hypothesis::EOP: return "EOP";
    case Hypothesis::PE: return "PE";
  }
  return "?";
}

const char* hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::SP: return "Statistical parity";
    case Hypothesis::CSP: return "Conditional statistical parity";
    case Hypothesis::EO: return "Equal odds";
    case Hypothesis::EOP: return "Equal opportunity";
    case Hypothesis::PE: return "Predictive equality";
  }
  return "?";
}

FairnessReport test_statistical_parity(std::span<const int> yhat,
                                       std::span<const int> d, double alpha) {
  if (yhat.size() != d.size()) {
    throw DataError("test_statistical_parity: sequence lengths differ");
  }
  check_binary(yhat, "yhat");
  check_binary(d, "d");
  const std::vector<int> strata(yhat.size(), 0);
  const std::vector<std::string> names = {"all"};
  return from_table(Hypothesis::SP, build_table(yhat, d, strata, names), alpha);
}

FairnessReport test_conditional_parity(std::span<const int> yhat,
                                       std::span<const int> d,
                                       std::span<const int> classes,
                                       double alpha) {
  if (yhat.size() != d.size() || yhat.size() != classes.size()) {
    throw DataError("test_conditional_parity: sequence lengths differ");
  }
  check_binary(yhat, "yhat");
  check_binary(d, "d");
  int max_class = 0;
  for (int c : classes) {
    if (c < 0) throw DataError("test_conditional_parity: negative class label");
    max_class = std::max(max_class, c);
  }
  std::vector<std::string> names;
  for (int c = 0; c <= max_class; ++c) {
    names.push_back("Class " + std::to_string(c + 1));
  }
  return from_table(Hypothesis::CSP, build_table(yhat, d, classes, names), alpha);
}

FairnessReport test_equal_odds(std::span<const int> yhat, std::span<const int> y,
                               std::span<const int> d, double alpha) {
  if (yhat.size() != y.size() || yhat.size() != d.size()) {
    throw DataError("test_equal_odds: sequence lengths differ");
  }
  check_binary(yhat, "yhat");
  check_binary(y, "y");
  check_binary(d, "d");
  bool seen[2] = {false, false};
  for (int v : y) seen[v] = true;
  if (!seen[0] || !seen[1]) {
    throw DataError("test_equal_odds: an outcome stratum is absent");
  }
  const std::vector<std::string> names = {"Y=0", "Y=1"};
  return from_table(Hypothesis::EO, build_table(yhat, d, y, names), alpha);
}

FairnessReport test_equal_opportunity(std::span<const int> yhat,
                                      std::span<const int> y,
                                      std::span<const int> d, double alpha) {
  return outcome_stratum_test(Hypothesis::EOP, yhat, y, d, 1, alpha);
}

FairnessReport test_predictive_equality(std::span<const int> yhat,
                                        std::span<const int> y,
                                        std::span<const int> d, double alpha) {
  return outcome_stratum_test(Hypothesis::PE, yhat, y, d, 0, alpha);
}

FairnessReport run_fairness_test(Hypothesis h, std::span<const int> yhat,
                                 std::span<const int> y, std::span<const int> d,
                                 std::span<const int> classes, double alpha) {
  switch (h) {
    case Hypothesis::SP: return test_statistical_parity(yhat, d, alpha);
    case Hypothesis::CSP: return test_conditional_parity(yhat, d, classes, alpha);
    case Hypothesis::EO: return test_equal_odds(yhat, y, d, alpha);
    case Hypothesis::EOP: return test_equal_opportunity(yhat, y, d, alpha);
    case Hypothesis::PE: return test_predictive_equality(yhat, y, d, alpha);
  }
  throw DomainError("run_fairness_test: unknown hypothesis");
}

const FairnessReport& AuditResult::report(Hypothesis h) const {
  for (const auto& r : reports) {
    if (r.hypothesis == h) return r;
  }
  throw DomainError("AuditResult: missing report");
}

AuditResult audit(const Classifier& model, const EncodedMatrix& x,
                  std::span<const int> y, std::span<const int> d, double delta,
                  double alpha, std::span<const int> classes) {
  AuditResult result;
  result.yhat = classify(model, x, delta);
  for (Hypothesis h : {Hypothesis::SP, Hypothesis::CSP, Hypothesis::EO,
                       Hypothesis::EOP, Hypothesis::PE}) {
    result.reports.push_back(
        run_fairness_test(h, result.yhat, y, d, classes, alpha));
  }
  return result;
}

namespace {

nlohmann::json report_to_json_obj(const FairnessReport& r) {
  nlohmann::json strata = nlohmann::json::array();
  for (const auto& s : r.per_stratum) {
    strata.push_back({{"label", s.label},
                      {"counts",
                       {{"n11", s.counts.n[1][1]},
                        {"n10", s.counts.n[1][0]},
                        {"n01", s.counts.n[0][1]},
                        {"n00", s.counts.n[0][0]}}},
                      {"statistic", s.chi2.statistic},
                      {"dof", s.chi2.dof},
                      {"p_value", s.chi2.p_value},
                      {"degenerate", s.chi2.degenerate}});
  }
  return {{"name", hypothesis_name(r.hypothesis)},
          {"strata", std::move(strata)},
          {"statistic", r.global_statistic},
          {"dof", r.global_dof},
          {"p_value", r.p_value},
          {"alpha", r.alpha},
          {"reject", r.reject},
          {"any_stratum_rejects", r.any_stratum_rejects},
          {"majority_of_strata_reject", r.majority_of_strata_reject}};
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string audit_to_json(const AuditResult& audit) {
  nlohmann::json j;
  for (const auto& r : audit.reports) {
    j[hypothesis_tag(r.hypothesis)] = report_to_json_obj(r);
  }
  return j.dump(1) + "\n";
}

std::string audit_to_csv(const AuditResult& audit) {
  std::ostringstream out;
  out << "test,statistic,dof,p_value,reject\n";
  auto emit = [&](const std::string& label, double stat, int dof, double p,
                  bool reject) {
    out << label << ',' << format_number(stat) << ',' << dof << ','
        << format_number(p) << ',' << (reject ? 1 : 0) << '\n';
  };
  for (const auto& r : audit.reports) {
    if (r.hypothesis == Hypothesis::CSP) {
      for (const auto& s : r.per_stratum) {
        emit("Cond. parity " + s.label, s.chi2.statistic, s.chi2.dof,
             s.chi2.p_value, !s.chi2.degenerate && s.chi2.p_value < r.alpha);
      }
      emit("Cond. parity (global)", r.global_statistic, r.global_dof, r.p_value,
           r.reject);
    } else {
      emit(hypothesis_name(r.hypothesis), r.global_statistic, r.global_dof,
           r.p_value, r.reject);
    }
  }
  return out.str();
}

}  // namespace fairaudit
