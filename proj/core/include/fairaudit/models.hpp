#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/dataset.hpp"

namespace fairaudit {

/// A trained scorer. predict_proba maps an encoded row (in the training
/// column layout) to the probability of the favorable outcome; it is a pure
/// function of the row, so trained models are immutable and freely shared.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual double predict_proba(std::span<const double> row) const = 0;
  virtual const std::vector<std::string>& column_names() const = 0;

  /// Indices (into the training layout) of columns the model actually
  /// consumes. Logistic models consume every column; trees report their
  /// split columns.
  virtual std::vector<std::size_t> columns_used() const = 0;

  std::vector<double> predict_proba_all(const EncodedMatrix& m) const;
};

// ---------------------------------------------------------------------------
// Logistic regression (optional ridge penalty)

struct LogisticModel final : Classifier {
  std::vector<double> weights;
  double intercept = 0.0;
  double lambda = 0.0;
  Standardization standardization;  // carried from training
  std::vector<std::string> columns;
  bool converged = false;
  int iterations = 0;

  double predict_proba(std::span<const double> row) const override;
  const std::vector<std::string>& column_names() const override { return columns; }
  std::vector<std::size_t> columns_used() const override;
};

/// Minimizes mean negative log-likelihood + lambda * ||w||^2 / 2 (intercept
/// unpenalized) by damped Newton with backtracking line search, to gradient
/// max-norm <= tol. Columns are standardized internally (constant columns are
/// left as-is); the transform is carried inside the returned model.
/// Non-convergence is reported through the `converged` flag, not an error.
LogisticModel train_logistic(const EncodedMatrix& x, std::span<const int> y,
                             double lambda, double tol = 1e-8, int max_iter = 100);

// ---------------------------------------------------------------------------
// CART decision tree

enum class SplitCriterion { Gini, Entropy };
enum class FeatureSampling { All, Sqrt, Log2 };

struct TreeHyperparams {
  SplitCriterion criterion = SplitCriterion::Gini;
  int max_depth = 1;
  int min_split = 2;   // smallest node eligible for splitting
  int min_leaf = 1;    // smallest allowed child
  FeatureSampling features_per_split = FeatureSampling::All;
  double min_impurity_decrease = 0.0;
};

struct TreeModel final : Classifier {
  struct Node {
    int left = -1;   // -1 marks a leaf
    int right = -1;
    int column = -1;
    double threshold = 0.0;  // x <= threshold goes left
    double probability = 0.0;  // favorable fraction at the node
    long samples = 0;
  };
  std::vector<Node> nodes;  // nodes[0] is the root
  TreeHyperparams params;
  std::vector<std::string> columns;

  double predict_proba(std::span<const double> row) const override;
  const std::vector<std::string>& column_names() const override { return columns; }
  std::vector<std::size_t> columns_used() const override;

  int depth() const;
  long leaf_count() const;
};

/// Greedy CART. The best split maximizes the weighted impurity decrease
/// under the criterion; candidate thresholds are midpoints of consecutive
/// distinct values; ties break to the lowest column index, then the lowest
/// threshold. Recursion stops on max_depth, min_split, min_leaf,
/// min_impurity_decrease or purity. The seed feeds per-node feature
/// subsampling and is unused when features_per_split is All.
TreeModel train_tree(const EncodedMatrix& x, std::span<const int> y,
                     const TreeHyperparams& h, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Decision rule and performance metrics

/// Thresholded labels: 1 iff predict_proba(row) > delta (strictly).
std::vector<int> classify(const Classifier& c, const EncodedMatrix& x, double delta);
std::vector<int> classify_scores(std::span<const double> scores, double delta);

/// Percentage of correct classification.
double pcc(std::span<const int> y, std::span<const int> yhat);

/// Area under the ROC curve, Mann-Whitney rank formulation; tied scores
/// contribute one half. Exactly equals brute-force pair counting.
double auc(std::span<const int> y, std::span<const double> scores);

// ---------------------------------------------------------------------------
// Hyperparameter search

struct HyperparamSpace {
  std::vector<SplitCriterion> criteria = {SplitCriterion::Entropy,
                                          SplitCriterion::Gini};
  int max_depth_lo = 1, max_depth_hi = 29;
  int min_split_lo = 2, min_split_hi = 9;
  int min_leaf_lo = 1, min_leaf_hi = 19;
  std::vector<FeatureSampling> feature_options = {
      FeatureSampling::All, FeatureSampling::Sqrt, FeatureSampling::Log2};
  std::vector<double> min_impurity_decrease_values = {0.0, 0.1, 0.2, 0.3, 0.4,
                                                      0.5, 0.6, 0.7, 0.8, 0.9};
};

struct SearchDraw {
  TreeHyperparams config;
  double mean_accuracy = 0.0;
};

struct SearchResult {
  TreeHyperparams best;
  double best_accuracy = 0.0;
  std::vector<SearchDraw> table;
};

/// Samples `draws` configurations uniformly from the space and returns the
/// one with the highest mean out-of-fold accuracy over k folds (ties keep
/// the first drawn). Deterministic in the seed.
SearchResult random_search_cv(const HyperparamSpace& space, const EncodedMatrix& x,
                              std::span<const int> y, std::size_t k, int draws,
                              std::uint64_t seed);

// ---------------------------------------------------------------------------
// Shipped presets, so audits do not depend on search stochasticity.

TreeHyperparams tree_preset();        // Gini, depth 20, split 2, leaf 5, sqrt
TreeHyperparams tree_prime_preset();  // Gini, depth 7, split 56, leaf 18, all
HyperparamSpace tree_search_space();
HyperparamSpace tree_prime_search_space();
constexpr double kRidgePresetLambda = 0.2001;

/// Default pipeline seed. Its "clustering" substream reproduces the frozen
/// 827/173 risk-class split and its "tree" substream the frozen reference
/// tree fixtures; see the golden tests.
constexpr std::uint64_t kDefaultSeed = 125;

// ---------------------------------------------------------------------------
// Persistence: versioned JSON text, bit-exact round-trip.

std::string serialize_model(const Classifier& model);
std::unique_ptr<Classifier> deserialize_model(const std::string& json_text);
void save_model(const Classifier& model, const std::string& path);
std::unique_ptr<Classifier> load_model(const std::string& path);

}  // namespace fairaudit
