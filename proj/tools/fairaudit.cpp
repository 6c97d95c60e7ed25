// Batch auditing front end: ingest lending data, train interpretable
// scorers, run the fairness test suite, sweep features for candidate
// variables, and evaluate mitigation strategies. Every command is
// deterministic in (config, input data) and records a manifest of output
// hashes.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fairaudit/clustering.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/error.hpp"
#include "fairaudit/fairness.hpp"
#include "fairaudit/fpdp.hpp"
#include "fairaudit/mitigation.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/rng.hpp"
#include "fairaudit/sha256.hpp"
#include "fairaudit/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fairaudit;

namespace {

struct RunConfig {
  std::string data;
  std::string schema;      // empty: native whitespace-separated format
  std::string model_path;  // empty: train the preset
  std::string preset = "tree-prime";
  bool with_gender = false;
  double delta = 0.5;
  double alpha = 0.05;       // test level
  double fpdp_alpha = 0.10;  // sweep / mitigation level
  int classes = 2;
  std::optional<double> gamma;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "out";
  std::vector<std::string> features;  // empty: features the model consumes
  std::size_t fpdp_grid = 0;          // 0: observed distinct values
  bool fair_include_pe = false;
  std::vector<std::string> hypotheses = {"SP", "CSP", "EO", "EOP"};

  json to_json() const {
    json j;
    j["data"] = data;
    j["schema"] = schema;
    j["model"] = model_path;
    j["preset"] = preset;
    j["with_gender"] = with_gender;
    j["delta"] = delta;
    j["alpha"] = alpha;
    j["fpdp_alpha"] = fpdp_alpha;
    j["classes"] = classes;
    if (gamma) {
      j["gamma"] = *gamma;
    } else {
      j["gamma"] = nullptr;
    }
    j["seed"] = seed;
    j["out"] = out;
    j["features"] = features;
    j["fpdp_grid"] = fpdp_grid;
    j["fair_include_pe"] = fair_include_pe;
    j["hypotheses"] = hypotheses;
    return j;
  }

  void validate() const {
    if (data.empty()) throw DataError("config: no input data given (--data)");
    if (!(delta > 0.0 && delta < 1.0)) {
      throw DataError("config: delta must lie in (0,1)");
    }
    for (double a : {alpha, fpdp_alpha}) {
      if (!(a > 0.0 && a < 0.5)) {
        throw DataError("config: significance levels must lie in (0, 1/2)");
      }
    }
    if (classes < 2) throw DataError("config: classes must be >= 2");
  }
};

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError(std::string("config: invalid JSON: ") + e.what());
  }
  if (j.contains("data")) cfg.data = j["data"].get<std::string>();
  if (j.contains("schema") && !j["schema"].is_null()) {
    cfg.schema = j["schema"].get<std::string>();
  }
  if (j.contains("model") && !j["model"].is_null()) {
    cfg.model_path = j["model"].get<std::string>();
  }
  if (j.contains("preset")) cfg.preset = j["preset"].get<std::string>();
  if (j.contains("with_gender")) cfg.with_gender = j["with_gender"].get<bool>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
  if (j.contains("fpdp_alpha")) cfg.fpdp_alpha = j["fpdp_alpha"].get<double>();
  if (j.contains("classes")) cfg.classes = j["classes"].get<int>();
  if (j.contains("gamma") && !j["gamma"].is_null()) {
    cfg.gamma = j["gamma"].get<double>();
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("features")) {
    cfg.features = j["features"].get<std::vector<std::string>>();
  }
  if (j.contains("fpdp_grid")) cfg.fpdp_grid = j["fpdp_grid"].get<std::size_t>();
  if (j.contains("fair_include_pe")) {
    cfg.fair_include_pe = j["fair_include_pe"].get<bool>();
  }
  if (j.contains("hypotheses")) {
    cfg.hypotheses = j["hypotheses"].get<std::vector<std::string>>();
  }
}

/// Collects written artifacts and emits manifest.json at the end of a run.
class Manifest {
 public:
  Manifest(fs::path out_dir, const RunConfig& cfg)
      : out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
    config_text_ = cfg.to_json().dump(1) + "\n";
  }

  void write_file(const std::string& relpath, const std::string& content) {
    const fs::path full = out_dir_ / relpath;
    fs::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary);
    if (!out) throw DataError("cannot write " + full.string());
    out << content;
    artifacts_[relpath] = sha256_hex(content);
  }

  void finalize(const std::string& command) {
    json j;
    j["command"] = command;
    j["config"] = json::parse(config_text_);
    j["config_sha256"] = sha256_hex(config_text_);
    j["artifacts"] = artifacts_;
    const std::string text = j.dump(1) + "\n";
    std::ofstream out(out_dir_ / "manifest.json", std::ios::binary);
    out << text;
  }

 private:
  fs::path out_dir_;
  std::string config_text_;
  std::map<std::string, std::string> artifacts_;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

Dataset load_dataset(const RunConfig& cfg) {
  if (!cfg.schema.empty()) return load_csv(cfg.data, cfg.schema);
  return load_german_credit(cfg.data);
}

Hypothesis hypothesis_from_tag(const std::string& tag) {
  for (Hypothesis h : {Hypothesis::SP, Hypothesis::CSP, Hypothesis::EO,
                       Hypothesis::EOP, Hypothesis::PE}) {
    if (tag == hypothesis_tag(h)) return h;
  }
  throw DataError("unknown hypothesis tag '" + tag + "'");
}

struct TrainedModel {
  std::unique_ptr<Classifier> owned;
  const Classifier* model = nullptr;
  std::string description;
};

TrainedModel obtain_model(const RunConfig& cfg, const EncodedMatrix& x,
                          const std::vector<int>& y) {
  TrainedModel tm;
  if (!cfg.model_path.empty()) {
    tm.owned = load_model(cfg.model_path);
    if (tm.owned->column_names() != x.column_names) {
      throw DataError("model at " + cfg.model_path +
                      " was trained on a different encoding");
    }
    tm.description = "loaded:" + cfg.model_path;
  } else if (cfg.preset == "lr") {
    tm.owned = std::make_unique<LogisticModel>(train_logistic(x, y, 0.0));
    tm.description = "preset:lr";
  } else if (cfg.preset == "ridge") {
    tm.owned = std::make_unique<LogisticModel>(
        train_logistic(x, y, kRidgePresetLambda));
    tm.description = "preset:ridge";
  } else if (cfg.preset == "tree") {
    tm.owned = std::make_unique<TreeModel>(
        train_tree(x, y, tree_preset(), Rng::substream(cfg.seed, "tree")));
    tm.description = "preset:tree";
  } else if (cfg.preset == "tree-prime") {
    tm.owned = std::make_unique<TreeModel>(
        train_tree(x, y, tree_prime_preset(), Rng::substream(cfg.seed, "tree")));
    tm.description = "preset:tree-prime";
  } else {
    throw DataError("unknown preset '" + cfg.preset +
                    "' (expected lr, ridge, tree or tree-prime)");
  }
  tm.model = tm.owned.get();
  return tm;
}

/// Quantile bins for Cramer's V on numeric features; categorical features
/// pass through as level codes.
std::vector<int> association_codes(const Dataset& d, std::size_t col) {
  const FeatureSpec& s = d.spec(col);
  if (s.kind == FeatureKind::Categorical) {
    const auto& codes = d.codes_column(col);
    return {codes.begin(), codes.end()};
  }
  const auto& values = d.numeric_column(col);
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> edges;
  for (int q = 1; q < 10; ++q) {
    edges.push_back(sorted[sorted.size() * static_cast<std::size_t>(q) / 10]);
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<int> bins(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    bins[i] = static_cast<int>(
        std::lower_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
  }
  return bins;
}

int cmd_ingest(const RunConfig& cfg) {
  const Dataset d = load_dataset(cfg);
  const std::vector<int> y = d.target_values();
  const std::vector<int> prot = d.protected_values();

  Manifest manifest(cfg.out, cfg);

  long protected_count = 0, default_count = 0;
  long defaults_protected = 0, defaults_unprotected = 0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    protected_count += prot[i];
    if (y[i] == 0) {
      ++default_count;
      (prot[i] ? defaults_protected : defaults_unprotected) += 1;
    }
  }
  const long unprotected_count = static_cast<long>(d.n()) - protected_count;

  json summary;
  summary["rows"] = d.n();
  summary["protected_count"] = protected_count;
  summary["unprotected_count"] = unprotected_count;
  summary["default_count"] = default_count;
  summary["defaults_protected"] = defaults_protected;
  summary["defaults_unprotected"] = defaults_unprotected;
  summary["default_rate_protected_pct"] =
      100.0 * static_cast<double>(defaults_protected) /
      static_cast<double>(protected_count);
  summary["default_rate_unprotected_pct"] =
      100.0 * static_cast<double>(defaults_unprotected) /
      static_cast<double>(unprotected_count);

  json columns = json::array();
  for (std::size_t c = 0; c < d.column_count(); ++c) {
    const FeatureSpec& s = d.spec(c);
    json col;
    col["name"] = s.name;
    col["kind"] = s.kind == FeatureKind::Numeric ? "numeric" : "categorical";
    switch (s.role) {
      case FeatureRole::Feature: col["role"] = "feature"; break;
      case FeatureRole::Target: col["role"] = "target"; break;
      case FeatureRole::Protected: col["role"] = "protected"; break;
      case FeatureRole::Excluded: col["role"] = "excluded"; break;
    }
    if (s.kind == FeatureKind::Categorical) {
      std::map<std::string, long> counts;
      for (const std::string& lv : s.levels) counts[lv] = 0;
      const auto& codes = d.codes_column(c);
      for (std::int32_t code : codes) counts[s.levels[code]] += 1;
      col["level_counts"] = counts;
    } else {
      const auto& v = d.numeric_column(c);
      double mean = 0.0, lo = v[0], hi = v[0];
      for (double x : v) {
        mean += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      mean /= static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      col["min"] = lo;
      col["max"] = hi;
      col["mean"] = mean;
      col["stddev"] = std::sqrt(var / static_cast<double>(v.size()));
    }
    columns.push_back(std::move(col));
  }
  summary["columns"] = std::move(columns);
  manifest.write_file("summary.json", summary.dump(1) + "\n");

  // Association map data: each explanatory feature against the target and
  // against the protected attribute.
  std::ostringstream assoc;
  assoc << "feature,v_target,v_protected\n";
  const std::vector<int> ybin(y.begin(), y.end());
  const std::vector<int> dbin(prot.begin(), prot.end());
  for (std::size_t c = 0; c < d.column_count(); ++c) {
    if (d.spec(c).role != FeatureRole::Feature) continue;
    const std::vector<int> codes = association_codes(d, c);
    try {
      const double vt = cramers_v(codes, ybin);
      const double vp = cramers_v(codes, dbin);
      assoc << d.spec(c).name << ',' << format_number(vt) << ','
            << format_number(vp) << '\n';
    } catch (const DataError&) {
      // Association undefined (constant feature); the summary still stands.
    }
  }
  manifest.write_file("associations.csv", assoc.str());
  manifest.finalize("ingest");

  std::cout << "rows=" << d.n() << " protected=" << protected_count
            << " defaults=" << default_count << "\n";
  return 0;
}

json metrics_json(const Classifier& model, const EncodedMatrix& x,
                  const std::vector<int>& y, double delta) {
  const std::vector<double> scores = model.predict_proba_all(x);
  const std::vector<int> yhat = classify_scores(scores, delta);
  json j;
  j["pcc"] = pcc(y, yhat);
  j["auc"] = auc(y, scores);
  j["positive_rate"] =
      static_cast<double>(std::count(yhat.begin(), yhat.end(), 1)) /
      static_cast<double>(yhat.size());
  return j;
}

int cmd_train(const RunConfig& cfg) {
  const Dataset d = load_dataset(cfg);
  const EncodedMatrix x = one_hot_encode(d, cfg.with_gender);
  const std::vector<int> y = d.target_values();

  if (!cfg.model_path.empty()) {
    throw DataError("train: --model conflicts with training a preset");
  }
  Manifest manifest(cfg.out, cfg);
  const TrainedModel tm = obtain_model(cfg, x, y);
  manifest.write_file("model.json", serialize_model(*tm.model));

  json metrics = metrics_json(*tm.model, x, y, cfg.delta);
  metrics["preset"] = cfg.preset;
  metrics["with_gender"] = cfg.with_gender;
  manifest.write_file("metrics.json", metrics.dump(1) + "\n");
  manifest.finalize("train");

  std::cout << "preset=" << cfg.preset << " pcc=" << metrics["pcc"]
            << " auc=" << metrics["auc"] << "\n";
  return 0;
}

struct AuditSetup {
  Dataset dataset;
  EncodedMatrix x;
  std::vector<int> y;
  std::vector<int> d;
  RiskClassAssignment classes;
  TrainedModel model;
};

AuditSetup prepare_audit(const RunConfig& cfg) {
  Dataset data = load_dataset(cfg);
  EncodedMatrix x = one_hot_encode(data, cfg.with_gender);
  std::vector<int> y = data.target_values();
  std::vector<int> prot = data.protected_values();
  RiskClassAssignment classes =
      kprototypes(data, cfg.classes, cfg.gamma,
                  Rng::substream(cfg.seed, "clustering"));
  TrainedModel tm = obtain_model(cfg, x, y);
  return {std::move(data), std::move(x), std::move(y), std::move(prot),
          std::move(classes), std::move(tm)};
}

int cmd_audit(const RunConfig& cfg) {
  AuditSetup s = prepare_audit(cfg);
  Manifest manifest(cfg.out, cfg);

  const AuditResult result =
      audit(*s.model.model, s.x, s.y, s.d, cfg.delta, cfg.alpha, s.classes.labels);
  manifest.write_file("audit.json", audit_to_json(result));
  manifest.write_file("audit.csv", audit_to_csv(result));

  std::ostringstream classes_csv;
  classes_csv << "row,class\n";
  for (std::size_t i = 0; i < s.classes.labels.size(); ++i) {
    classes_csv << i << ',' << s.classes.labels[i] << '\n';
  }
  manifest.write_file("classes.csv", classes_csv.str());
  if (s.model.description.rfind("preset:", 0) == 0) {
    manifest.write_file("model.json", serialize_model(*s.model.model));
  }
  manifest.finalize("audit");

  for (const auto& r : result.reports) {
    std::cout << hypothesis_name(r.hypothesis) << ": p="
              << format_number(r.p_value) << (r.reject ? " reject" : "") << "\n";
  }
  return 0;
}

std::vector<std::string> sweep_features(const RunConfig& cfg, const AuditSetup& s) {
  if (!cfg.features.empty()) return cfg.features;
  return features_consumed(*s.model.model, s.x);
}

int cmd_fpdp(const RunConfig& cfg) {
  AuditSetup s = prepare_audit(cfg);
  Manifest manifest(cfg.out, cfg);

  const FpdpContext ctx{*s.model.model, s.x,        s.y,
                        s.d,            s.classes.labels, cfg.delta,
                        cfg.fpdp_alpha};
  const std::vector<std::string> features = sweep_features(cfg, s);

  std::vector<FpdpCurve> curves;
  std::vector<CandidateVerdict> verdicts;
  for (const std::string& tag : cfg.hypotheses) {
    const Hypothesis h = hypothesis_from_tag(tag);
    for (const std::string& feature : features) {
      FpdpCurve curve;
      const auto& cols = s.x.groups.at(feature);
      if (cols.size() == 1 && cfg.fpdp_grid >= 2) {
        const std::vector<double> grid =
            uniform_grid(s.x, feature, cfg.fpdp_grid);
        curve = fpdp_continuous(ctx, feature, h, grid);
      } else {
        curve = fpdp_sweep(ctx, feature, h);
      }
      manifest.write_file("fpdp/" + feature + "." + tag + ".csv",
                          curve_to_csv(curve));
      if (tag == cfg.hypotheses.front()) {
        CandidateVerdict v;
        v.feature = feature;
        for (const FpdpPoint& pt : curve.grid) {
          if (pt.p_value > ctx.alpha) v.witness_values.push_back(pt.value);
        }
        v.is_candidate = !v.witness_values.empty();
        verdicts.push_back(std::move(v));
      }
      curves.push_back(std::move(curve));
    }
  }
  manifest.write_file("fpdp_index.json", curves_index_json(curves, verdicts));
  manifest.finalize("fpdp");

  for (const auto& v : verdicts) {
    if (v.is_candidate) std::cout << "candidate: " << v.feature << "\n";
  }
  return 0;
}

int cmd_mitigate(const RunConfig& cfg) {
  AuditSetup s = prepare_audit(cfg);
  Manifest manifest(cfg.out, cfg);

  const FpdpContext ctx{*s.model.model, s.x,        s.y,
                        s.d,            s.classes.labels, cfg.delta,
                        cfg.fpdp_alpha};
  const std::vector<std::string> features = sweep_features(cfg, s);
  const std::vector<CandidateVerdict> verdicts =
      candidate_variables(ctx, Hypothesis::SP, features);

  std::vector<MitigationRow> fix_rows, drop_rows;
  for (const CandidateVerdict& v : verdicts) {
    if (!v.is_candidate) continue;
    for (const std::string& value : v.witness_values) {
      fix_rows.push_back(mitigate_fix_value(ctx, v.feature, value,
                                            cfg.fpdp_alpha, cfg.fair_include_pe));
    }
    if (const auto* tree = dynamic_cast<const TreeModel*>(s.model.model)) {
      drop_rows.push_back(mitigate_reestimate(
          tree->params, ctx, v.feature, cfg.fpdp_alpha,
          Rng::substream(cfg.seed, "tree"), cfg.fair_include_pe));
    } else if (const auto* lm = dynamic_cast<const LogisticModel*>(s.model.model)) {
      drop_rows.push_back(mitigate_reestimate_logistic(
          lm->lambda, ctx, v.feature, cfg.fpdp_alpha, cfg.fair_include_pe));
    }
  }

  json combined;
  combined["candidates"] = json::array();
  for (const auto& v : verdicts) {
    combined["candidates"].push_back({{"feature", v.feature},
                                      {"is_candidate", v.is_candidate},
                                      {"witness_values", v.witness_values}});
  }
  if (!drop_rows.empty()) {
    const TradeoffTable t = tradeoff_table(std::move(drop_rows));
    manifest.write_file("mitigation_reestimate.csv", tradeoff_to_csv(t));
    combined["reestimate"] = json::parse(tradeoff_to_json(t));
  }
  if (!fix_rows.empty()) {
    const TradeoffTable t = tradeoff_table(std::move(fix_rows));
    manifest.write_file("mitigation_fix.csv", tradeoff_to_csv(t));
    combined["fix"] = json::parse(tradeoff_to_json(t));
    std::size_t shown = 0;
    for (const auto& row : t.rows) {
      if (row.fair && shown < 3) {
        std::cout << row.strategy << " auc=" << format_number(row.auc_score)
                  << " pcc=" << format_number(row.pcc_score) << " fair\n";
        ++shown;
      }
    }
  }
  manifest.write_file("mitigation.json", combined.dump(1) + "\n");
  manifest.finalize("mitigate");
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  // Full batch: ingest summary, model, audit, sweeps, mitigation, one manifest.
  cmd_ingest(cfg);
  cmd_train(cfg);
  cmd_audit(cfg);
  cmd_fpdp(cfg);
  cmd_mitigate(cfg);

  // Re-hash everything the sub-commands wrote into a single manifest.
  Manifest manifest(cfg.out, cfg);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(cfg.out)) {
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    manifest.write_file(fs::relative(p, cfg.out).string(), ss.str());
  }
  manifest.finalize("report");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // --config is applied first so explicit flags can override its fields.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_config_file(cfg, argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
    }
  }

  CLI::App app{"group-fairness auditing for binary credit scorers"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--data", cfg.data, "input data file");
    sub->add_option("--schema", cfg.schema, "JSON schema for CSV ingestion");
    sub->add_option("--model", cfg.model_path, "saved model to audit");
    sub->add_option("--preset", cfg.preset, "lr | ridge | tree | tree-prime");
    sub->add_flag("--with-gender", cfg.with_gender,
                  "include the protected attribute as a feature");
    sub->add_option("--delta", cfg.delta, "classification threshold");
    sub->add_option("--alpha", cfg.alpha, "test significance level");
    sub->add_option("--fpdp-alpha", cfg.fpdp_alpha,
                    "sweep / mitigation significance level");
    sub->add_option("--classes", cfg.classes, "number of risk classes");
    sub->add_option("--gamma", [&cfg](const std::vector<std::string>& vals) {
      try {
        cfg.gamma = std::stod(vals.at(0));
      } catch (const std::exception&) {
        return false;
      }
      return true;
    }, "categorical-distance weight for clustering");
    sub->add_option("--seed", cfg.seed, "root seed");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--features", cfg.features, "features to sweep")
        ->delimiter(',');
    sub->add_option("--fpdp-grid", cfg.fpdp_grid,
                    "uniform grid size for numeric sweeps (0 = observed values)");
    sub->add_flag("--fair-include-pe", cfg.fair_include_pe,
                  "include predictive equality in the mitigation fair flag");
    sub->add_option("--hypotheses", cfg.hypotheses, "hypothesis tags to sweep")
        ->delimiter(',');
  };

  CLI::App* ingest = app.add_subcommand("ingest", "dataset summary and association map");
  CLI::App* train = app.add_subcommand("train", "train a preset and persist it");
  CLI::App* audit_cmd = app.add_subcommand("audit", "run the five fairness tests");
  CLI::App* fpdp = app.add_subcommand("fpdp", "per-feature fairness sweeps");
  CLI::App* mitigate = app.add_subcommand("mitigate", "mitigation trade-off report");
  CLI::App* report = app.add_subcommand("report", "full pipeline into one directory");
  for (CLI::App* sub : {ingest, train, audit_cmd, fpdp, mitigate, report}) {
    add_common(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.validate();
    if (ingest->parsed()) return cmd_ingest(cfg);
    if (train->parsed()) return cmd_train(cfg);
    if (audit_cmd->parsed()) return cmd_audit(cfg);
    if (fpdp->parsed()) return cmd_fpdp(cfg);
    if (mitigate->parsed()) return cmd_mitigate(cfg);
    if (report->parsed()) return cmd_report(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
