#include "fairaudit/mitigation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairaudit/error.hpp"
#include "fairaudit/sha256.hpp"

namespace fairaudit {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string digest_labels(const std::vector<int>& yhat) {
  std::string bytes;
  bytes.reserve(yhat.size());
  for (int v : yhat) bytes.push_back(v ? '1' : '0');
  return sha256_hex(bytes);
}

MitigationRow measure(const FpdpContext& ctx, const std::vector<double>& scores,
                      double alpha, bool fair_includes_pe) {
  const std::vector<int> yhat = classify_scores(scores, ctx.delta);
  MitigationRow row;
  row.p_sp = run_fairness_test(Hypothesis::SP, yhat, ctx.y, ctx.d, ctx.classes,
                               alpha)
                 .p_value;
  row.p_csp = run_fairness_test(Hypothesis::CSP, yhat, ctx.y, ctx.d, ctx.classes,
                                alpha)
                  .p_value;
  row.p_eop = run_fairness_test(Hypothesis::EOP, yhat, ctx.y, ctx.d, ctx.classes,
                                alpha)
                  .p_value;
  row.p_eo = run_fairness_test(Hypothesis::EO, yhat, ctx.y, ctx.d, ctx.classes,
                               alpha)
                 .p_value;
  row.p_pe = run_fairness_test(Hypothesis::PE, yhat, ctx.y, ctx.d, ctx.classes,
                               alpha)
                 .p_value;
  row.auc_score = auc(ctx.y, scores);
  row.pcc_score = pcc(ctx.y, yhat);
  row.fair = row.p_sp > alpha && row.p_csp > alpha && row.p_eop > alpha &&
             row.p_eo > alpha && (!fair_includes_pe || row.p_pe > alpha);
  row.prediction_digest = digest_labels(yhat);
  return row;
}

}  // namespace

MitigationRow mitigate_fix_value(const FpdpContext& ctx, const std::string& feature,
                                 const std::string& value, double alpha,
                                 bool fair_includes_pe) {
  const auto it = ctx.x.groups.find(feature);
  if (it == ctx.x.groups.end()) {
    throw DataError("mitigate_fix_value: unknown feature '" + feature + "'");
  }
  const auto& cols = it->second;

  EncodedMatrix work = ctx.x;
  if (cols.size() > 1) {
    std::size_t level = cols.size();
    for (std::size_t l = 0; l < cols.size(); ++l) {
      const std::string& name = ctx.x.column_names[cols[l]];
      if (name == feature + "=" + value) {
        level = l;
        break;
      }
    }
    if (level == cols.size()) {
      throw DataError("mitigate_fix_value: '" + value +
                      "' is not a level of " + feature);
    }
    for (std::size_t r = 0; r < work.rows; ++r) {
      for (std::size_t l = 0; l < cols.size(); ++l) {
        work.at(r, cols[l]) = (l == level) ? 1.0 : 0.0;
      }
    }
  } else {
    double v = 0.0;
    const char* begin = value.data();
    auto [ptr, ec] = std::from_chars(begin, begin + value.size(), v);
    if (ec != std::errc{} || ptr != begin + value.size()) {
      throw DataError("mitigate_fix_value: '" + value +
                      "' is not a numeric value for " + feature);
    }
    for (std::size_t r = 0; r < work.rows; ++r) work.at(r, cols[0]) = v;
  }

  MitigationRow row =
      measure(ctx, ctx.model.predict_proba_all(work), alpha, fair_includes_pe);
  row.strategy = "fix(" + feature + "=" + value + ")";
  row.feature = feature;
  row.value = value;
  row.reestimated = false;
  return row;
}

MitigationRow mitigate_reestimate(const TreeHyperparams& preset,
                                  const FpdpContext& ctx,
                                  const std::string& drop_feature, double alpha,
                                  std::uint64_t seed, bool fair_includes_pe) {
  const auto it = ctx.x.groups.find(drop_feature);
  if (it == ctx.x.groups.end()) {
    throw DataError("mitigate_reestimate: unknown feature '" + drop_feature + "'");
  }
  std::vector<int> y(ctx.y.begin(), ctx.y.end());
  const EncodedMatrix reduced = ctx.x.without_columns(it->second);
  const TreeModel retrained = train_tree(reduced, y, preset, seed);

  MitigationRow row = measure(ctx, retrained.predict_proba_all(reduced), alpha,
                              fair_includes_pe);
  row.strategy = "drop(" + drop_feature + ")";
  row.feature = drop_feature;
  row.reestimated = true;
  return row;
}

MitigationRow mitigate_reestimate_logistic(double lambda, const FpdpContext& ctx,
                                           const std::string& drop_feature,
                                           double alpha, bool fair_includes_pe) {
  const auto it = ctx.x.groups.find(drop_feature);
  if (it == ctx.x.groups.end()) {
    throw DataError("mitigate_reestimate: unknown feature '" + drop_feature + "'");
  }
  std::vector<int> y(ctx.y.begin(), ctx.y.end());
  const EncodedMatrix reduced = ctx.x.without_columns(it->second);
  const LogisticModel retrained = train_logistic(reduced, y, lambda);

  MitigationRow row = measure(ctx, retrained.predict_proba_all(reduced), alpha,
                              fair_includes_pe);
  row.strategy = "drop(" + drop_feature + ")";
  row.feature = drop_feature;
  row.reestimated = true;
  return row;
}

TradeoffTable tradeoff_table(std::vector<MitigationRow> rows) {
  if (rows.empty()) throw DataError("tradeoff_table: no rows");
  std::stable_sort(rows.begin(), rows.end(),
                   [](const MitigationRow& a, const MitigationRow& b) {
                     if (a.auc_score != b.auc_score) {
                       return a.auc_score > b.auc_score;
                     }
                     if (a.pcc_score != b.pcc_score) {
                       return a.pcc_score > b.pcc_score;
                     }
                     return a.strategy < b.strategy;
                   });

  TradeoffTable table;
  table.rows = std::move(rows);

  std::map<std::string, std::vector<std::size_t>> by_digest;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!table.rows[i].reestimated) {
      by_digest[table.rows[i].prediction_digest].push_back(i);
    }
  }
  for (auto& [digest, members] : by_digest) {
    if (members.size() > 1) table.equivalence_classes.push_back(members);
  }
  std::sort(table.equivalence_classes.begin(), table.equivalence_classes.end());
  return table;
}

std::string tradeoff_to_csv(const TradeoffTable& table) {
  // Equivalence ids mark fix-value rows producing identical label vectors.
  std::vector<int> equivalence_id(table.rows.size(), 0);
  for (std::size_t g = 0; g < table.equivalence_classes.size(); ++g) {
    for (std::size_t i : table.equivalence_classes[g]) {
      equivalence_id[i] = static_cast<int>(g + 1);
    }
  }
  std::ostringstream out;
  out << "strategy,sp,csp_global,eop,eo,pe,auc,pcc,fair,equivalence_class\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const MitigationRow& r = table.rows[i];
    out << r.strategy << ',' << format_number(r.p_sp) << ','
        << format_number(r.p_csp) << ',' << format_number(r.p_eop) << ','
        << format_number(r.p_eo) << ',' << format_number(r.p_pe) << ','
        << format_number(r.auc_score) << ',' << format_number(r.pcc_score) << ','
        << (r.fair ? 1 : 0) << ',' << equivalence_id[i] << '\n';
  }
  return out.str();
}

std::string tradeoff_to_json(const TradeoffTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const MitigationRow& r : table.rows) {
    rows.push_back({{"strategy", r.strategy},
                    {"feature", r.feature},
                    {"value", r.value},
                    {"reestimated", r.reestimated},
                    {"p_values",
                     {{"SP", r.p_sp},
                      {"CSP", r.p_csp},
                      {"EOP", r.p_eop},
                      {"EO", r.p_eo},
                      {"PE", r.p_pe}}},
                    {"auc", r.auc_score},
                    {"pcc", r.pcc_score},
                    {"fair", r.fair},
                    {"prediction_digest", r.prediction_digest}});
  }
  nlohmann::json j;
  j["rows"] = std::move(rows);
  j["equivalence_classes"] = table.equivalence_classes;
  return j.dump(1) + "\n";
}

}  // namespace fairaudit
