#include "fairaudit/fpdp.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairaudit/error.hpp"

namespace fairaudit {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

const std::vector<std::size_t>& feature_columns(const EncodedMatrix& x,
                                                const std::string& feature) {
  const auto it = x.groups.find(feature);
  if (it == x.groups.end()) {
    throw DataError("fpdp: unknown feature '" + feature + "'");
  }
  return it->second;
}

FpdpPoint evaluate_point(const FpdpContext& ctx, EncodedMatrix& work,
                         Hypothesis hypothesis) {
  const std::vector<int> yhat = classify(ctx.model, work, ctx.delta);
  const FairnessReport r =
      run_fairness_test(hypothesis, yhat, ctx.y, ctx.d, ctx.classes, ctx.alpha);
  FpdpPoint pt;
  pt.statistic = r.global_statistic;
  pt.dof = r.global_dof;
  pt.p_value = r.p_value;
  pt.degenerate = r.global_dof == 0;
  return pt;
}

FpdpCurve make_curve(const FpdpContext& ctx, const std::string& feature,
                     Hypothesis hypothesis) {
  FpdpCurve curve;
  curve.feature = feature;
  curve.hypothesis = hypothesis;
  curve.alpha = ctx.alpha;
  const std::vector<int> yhat = classify(ctx.model, ctx.x, ctx.delta);
  const FairnessReport baseline =
      run_fairness_test(hypothesis, yhat, ctx.y, ctx.d, ctx.classes, ctx.alpha);
  curve.baseline_p_value = baseline.p_value;
  curve.baseline_rejected = baseline.reject;
  return curve;
}

}  // namespace

std::vector<double> default_grid(const EncodedMatrix& x, const std::string& feature) {
  const auto& cols = feature_columns(x, feature);
  if (cols.size() != 1) {
    throw DataError("fpdp: feature '" + feature + "' is not numeric");
  }
  std::set<double> distinct;
  for (std::size_t r = 0; r < x.rows; ++r) distinct.insert(x.at(r, cols[0]));
  return {distinct.begin(), distinct.end()};
}

std::vector<double> uniform_grid(const EncodedMatrix& x, const std::string& feature,
                                 std::size_t points) {
  if (points < 2) throw DomainError("uniform_grid: need at least 2 points");
  const auto& cols = feature_columns(x, feature);
  if (cols.size() != 1) {
    throw DataError("fpdp: feature '" + feature + "' is not numeric");
  }
  double lo = x.at(0, cols[0]), hi = lo;
  for (std::size_t r = 1; r < x.rows; ++r) {
    lo = std::min(lo, x.at(r, cols[0]));
    hi = std::max(hi, x.at(r, cols[0]));
  }
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                       static_cast<double>(points - 1);
  }
  return grid;
}

FpdpCurve fpdp_categorical(const FpdpContext& ctx, const std::string& feature,
                           Hypothesis hypothesis) {
  const auto& cols = feature_columns(ctx.x, feature);
  if (cols.size() < 2) {
    throw DataError("fpdp_categorical: feature '" + feature +
                    "' has no one-hot block");
  }
  FpdpCurve curve = make_curve(ctx, feature, hypothesis);

  EncodedMatrix work = ctx.x;
  for (std::size_t level = 0; level < cols.size(); ++level) {
    for (std::size_t r = 0; r < work.rows; ++r) {
      for (std::size_t l = 0; l < cols.size(); ++l) {
        work.at(r, cols[l]) = (l == level) ? 1.0 : 0.0;
      }
    }
    FpdpPoint pt = evaluate_point(ctx, work, hypothesis);
    const std::string& name = ctx.x.column_names[cols[level]];
    const auto eq = name.find('=');
    pt.value = eq == std::string::npos ? name : name.substr(eq + 1);
    curve.grid.push_back(std::move(pt));
  }
  return curve;
}

FpdpCurve fpdp_continuous(const FpdpContext& ctx, const std::string& feature,
                          Hypothesis hypothesis, std::span<const double> grid) {
  const auto& cols = feature_columns(ctx.x, feature);
  if (cols.size() != 1) {
    throw DataError("fpdp_continuous: feature '" + feature + "' is not numeric");
  }
  if (grid.empty()) throw DataError("fpdp_continuous: empty grid");
  FpdpCurve curve = make_curve(ctx, feature, hypothesis);

  EncodedMatrix work = ctx.x;
  for (double value : grid) {
    for (std::size_t r = 0; r < work.rows; ++r) work.at(r, cols[0]) = value;
    FpdpPoint pt = evaluate_point(ctx, work, hypothesis);
    pt.value = format_number(value);
    pt.numeric_value = value;
    curve.grid.push_back(std::move(pt));
  }
  return curve;
}

FpdpCurve fpdp_sweep(const FpdpContext& ctx, const std::string& feature,
                     Hypothesis hypothesis) {
  const auto& cols = feature_columns(ctx.x, feature);
  if (cols.size() == 1) {
    const std::vector<double> grid = default_grid(ctx.x, feature);
    return fpdp_continuous(ctx, feature, hypothesis, grid);
  }
  return fpdp_categorical(ctx, feature, hypothesis);
}

std::vector<CandidateVerdict> candidate_variables(
    const FpdpContext& ctx, Hypothesis hypothesis,
    std::span<const std::string> features) {
  std::vector<CandidateVerdict> verdicts;
  for (const std::string& feature : features) {
    const FpdpCurve curve = fpdp_sweep(ctx, feature, hypothesis);
    CandidateVerdict v;
    v.feature = feature;
    for (const FpdpPoint& pt : curve.grid) {
      if (pt.p_value > ctx.alpha) v.witness_values.push_back(pt.value);
    }
    v.is_candidate = !v.witness_values.empty();
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

std::vector<std::string> features_consumed(const Classifier& model,
                                           const EncodedMatrix& x) {
  const std::vector<std::size_t> used = model.columns_used();
  std::set<std::size_t> used_set(used.begin(), used.end());
  std::vector<std::string> features;
  for (const auto& [feature, cols] : x.groups) {
    if (x.protected_column && cols.size() == 1 && cols[0] == *x.protected_column) {
      continue;
    }
    for (std::size_t c : cols) {
      if (used_set.count(c)) {
        features.push_back(feature);
        break;
      }
    }
  }
  return features;  // groups is ordered by feature name
}

std::string curve_to_csv(const FpdpCurve& curve) {
  std::ostringstream out;
  out << "feature,hypothesis,value,statistic,dof,p_value,degenerate\n";
  for (const FpdpPoint& pt : curve.grid) {
    out << curve.feature << ',' << hypothesis_tag(curve.hypothesis) << ','
        << pt.value << ',' << format_number(pt.statistic) << ',' << pt.dof << ','
        << format_number(pt.p_value) << ',' << (pt.degenerate ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string curves_index_json(const std::vector<FpdpCurve>& curves,
                              const std::vector<CandidateVerdict>& verdicts) {
  nlohmann::json j;
  nlohmann::json curve_list = nlohmann::json::array();
  for (const FpdpCurve& c : curves) {
    curve_list.push_back({{"feature", c.feature},
                          {"hypothesis", hypothesis_tag(c.hypothesis)},
                          {"alpha", c.alpha},
                          {"baseline_p_value", c.baseline_p_value},
                          {"baseline_rejected", c.baseline_rejected},
                          {"points", c.grid.size()}});
  }
  nlohmann::json verdict_list = nlohmann::json::array();
  for (const CandidateVerdict& v : verdicts) {
    verdict_list.push_back({{"feature", v.feature},
                            {"is_candidate", v.is_candidate},
                            {"witness_values", v.witness_values}});
  }
  j["curves"] = std::move(curve_list);
  j["candidates"] = std::move(verdict_list);
  return j.dump(1) + "\n";
}

}  // namespace fairaudit
