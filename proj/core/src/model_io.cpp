#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairaudit/error.hpp"
#include "fairaudit/models.hpp"

namespace fairaudit {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

const char* criterion_name(SplitCriterion c) {
  return c == SplitCriterion::Gini ? "gini" : "entropy";
}

SplitCriterion criterion_from(const std::string& s) {
  if (s == "gini") return SplitCriterion::Gini;
  if (s == "entropy") return SplitCriterion::Entropy;
  throw DataError("model: unknown criterion '" + s + "'");
}

const char* sampling_name(FeatureSampling f) {
  switch (f) {
    case FeatureSampling::All: return "all";
    case FeatureSampling::Sqrt: return "sqrt";
    case FeatureSampling::Log2: return "log2";
  }
  return "all";
}

FeatureSampling sampling_from(const std::string& s) {
  if (s == "all") return FeatureSampling::All;
  if (s == "sqrt") return FeatureSampling::Sqrt;
  if (s == "log2") return FeatureSampling::Log2;
  throw DataError("model: unknown feature sampling '" + s + "'");
}

json params_to_json(const TreeHyperparams& h) {
  return json{{"criterion", criterion_name(h.criterion)},
              {"max_depth", h.max_depth},
              {"min_split", h.min_split},
              {"min_leaf", h.min_leaf},
              {"features_per_split", sampling_name(h.features_per_split)},
              {"min_impurity_decrease", h.min_impurity_decrease}};
}

TreeHyperparams params_from_json(const json& j) {
  TreeHyperparams h;
  h.criterion = criterion_from(j.at("criterion").get<std::string>());
  h.max_depth = j.at("max_depth").get<int>();
  h.min_split = j.at("min_split").get<int>();
  h.min_leaf = j.at("min_leaf").get<int>();
  h.features_per_split = sampling_from(j.at("features_per_split").get<std::string>());
  h.min_impurity_decrease = j.at("min_impurity_decrease").get<double>();
  return h;
}

}  // namespace

std::string serialize_model(const Classifier& model) {
  json j;
  j["format"] = "fairaudit-model";
  j["version"] = kFormatVersion;
  if (const auto* lm = dynamic_cast<const LogisticModel*>(&model)) {
    j["type"] = "logistic";
    j["columns"] = lm->columns;
    j["weights"] = lm->weights;
    j["intercept"] = lm->intercept;
    j["lambda"] = lm->lambda;
    j["converged"] = lm->converged;
    j["iterations"] = lm->iterations;
    j["standardization"] = json{{"columns", lm->standardization.columns},
                                {"mean", lm->standardization.mean},
                                {"stddev", lm->standardization.stddev}};
  } else if (const auto* tm = dynamic_cast<const TreeModel*>(&model)) {
    j["type"] = "tree";
    j["columns"] = tm->columns;
    j["params"] = params_to_json(tm->params);
    json nodes = json::array();
    for (const auto& n : tm->nodes) {
      nodes.push_back(json::array(
          {n.left, n.right, n.column, n.threshold, n.probability, n.samples}));
    }
    j["nodes"] = std::move(nodes);
  } else {
    throw DataError("serialize_model: unknown model type");
  }
  return j.dump(1) + "\n";
}

std::unique_ptr<Classifier> deserialize_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw DataError(std::string("model: invalid JSON: ") + e.what());
  }
  if (j.value("format", "") != "fairaudit-model") {
    throw DataError("model: unrecognized document format");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw DataError("model: unsupported version " +
                    std::to_string(j.value("version", -1)));
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "logistic") {
    auto m = std::make_unique<LogisticModel>();
    m->columns = j.at("columns").get<std::vector<std::string>>();
    m->weights = j.at("weights").get<std::vector<double>>();
    m->intercept = j.at("intercept").get<double>();
    m->lambda = j.at("lambda").get<double>();
    m->converged = j.at("converged").get<bool>();
    m->iterations = j.at("iterations").get<int>();
    const json& st = j.at("standardization");
    m->standardization.columns = st.at("columns").get<std::vector<std::size_t>>();
    m->standardization.mean = st.at("mean").get<std::vector<double>>();
    m->standardization.stddev = st.at("stddev").get<std::vector<double>>();
    return m;
  }
  if (type == "tree") {
    auto m = std::make_unique<TreeModel>();
    m->columns = j.at("columns").get<std::vector<std::string>>();
    m->params = params_from_json(j.at("params"));
    for (const json& n : j.at("nodes")) {
      TreeModel::Node node;
      node.left = n.at(0).get<int>();
      node.right = n.at(1).get<int>();
      node.column = n.at(2).get<int>();
      node.threshold = n.at(3).get<double>();
      node.probability = n.at(4).get<double>();
      node.samples = n.at(5).get<long>();
      m->nodes.push_back(node);
    }
    if (m->nodes.empty()) throw DataError("model: tree without nodes");
    return m;
  }
  throw DataError("model: unknown type '" + type + "'");
}

void save_model(const Classifier& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_model: cannot write " + path);
  out << serialize_model(model);
}

std::unique_ptr<Classifier> load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_model: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace fairaudit
