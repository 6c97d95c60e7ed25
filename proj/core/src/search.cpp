#include <vector>

#include "fairaudit/error.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/rng.hpp"

namespace fairaudit {

namespace {

TreeHyperparams draw_config(const HyperparamSpace& s, Rng& rng) {
  TreeHyperparams h;
  h.criterion = s.criteria[static_cast<std::size_t>(
      rng.uniform_int(s.criteria.size()))];
  h.max_depth = static_cast<int>(rng.uniform_range(s.max_depth_lo, s.max_depth_hi));
  h.min_split = static_cast<int>(rng.uniform_range(s.min_split_lo, s.min_split_hi));
  h.min_leaf = static_cast<int>(rng.uniform_range(s.min_leaf_lo, s.min_leaf_hi));
  h.features_per_split = s.feature_options[static_cast<std::size_t>(
      rng.uniform_int(s.feature_options.size()))];
  h.min_impurity_decrease = s.min_impurity_decrease_values[static_cast<std::size_t>(
      rng.uniform_int(s.min_impurity_decrease_values.size()))];
  return h;
}

}  // namespace

SearchResult random_search_cv(const HyperparamSpace& space, const EncodedMatrix& x,
                              std::span<const int> y, std::size_t k, int draws,
                              std::uint64_t seed) {
  if (draws < 1) throw DomainError("random_search_cv: draws must be >= 1");
  const auto folds = kfold_indices(x.rows, k, Rng::substream(seed, "folds"));

  // Per-fold training views, built once.
  struct Fold {
    EncodedMatrix train_x;
    std::vector<int> train_y;
    std::vector<std::size_t> test_rows;
  };
  std::vector<Fold> fold_data;
  fold_data.reserve(k);
  for (const auto& test : folds) {
    std::vector<bool> held(x.rows, false);
    for (std::size_t i : test) held[i] = true;
    Fold f;
    f.test_rows = test;
    f.train_x.cols = x.cols;
    f.train_x.column_names = x.column_names;
    f.train_x.groups = x.groups;
    f.train_x.protected_column = x.protected_column;
    for (std::size_t r = 0; r < x.rows; ++r) {
      if (held[r]) continue;
      f.train_x.values.insert(f.train_x.values.end(), x.row(r).begin(),
                              x.row(r).end());
      f.train_y.push_back(y[r]);
    }
    f.train_x.rows = f.train_y.size();
    fold_data.push_back(std::move(f));
  }

  Rng draw_rng(Rng::substream(seed, "draws"));
  SearchResult result;
  for (int t = 0; t < draws; ++t) {
    const TreeHyperparams config = draw_config(space, draw_rng);
    double accuracy_sum = 0.0;
    for (std::size_t f = 0; f < fold_data.size(); ++f) {
      const std::uint64_t tree_seed =
          Rng::substream(seed, "tree") + 8191ULL * static_cast<std::uint64_t>(t) + f;
      const TreeModel model =
          train_tree(fold_data[f].train_x, fold_data[f].train_y, config, tree_seed);
      long matches = 0;
      for (std::size_t r : fold_data[f].test_rows) {
        const int pred = model.predict_proba(x.row(r)) > 0.5 ? 1 : 0;
        matches += (pred == y[r]);
      }
      accuracy_sum += static_cast<double>(matches) /
                      static_cast<double>(fold_data[f].test_rows.size());
    }
    const double mean_accuracy = accuracy_sum / static_cast<double>(k);
    result.table.push_back({config, mean_accuracy});
    if (t == 0 || mean_accuracy > result.best_accuracy) {
      result.best = config;
      result.best_accuracy = mean_accuracy;
    }
  }
  return result;
}

TreeHyperparams tree_preset() {
  return {SplitCriterion::Gini, 20, 2, 5, FeatureSampling::Sqrt, 0.0};
}

TreeHyperparams tree_prime_preset() {
  return {SplitCriterion::Gini, 7, 56, 18, FeatureSampling::All, 0.0};
}

HyperparamSpace tree_search_space() {
  HyperparamSpace s;
  s.max_depth_lo = 1;
  s.max_depth_hi = 29;
  s.min_split_lo = 2;
  s.min_split_hi = 9;
  s.min_leaf_lo = 1;
  s.min_leaf_hi = 19;
  return s;
}

HyperparamSpace tree_prime_search_space() {
  HyperparamSpace s;
  s.max_depth_lo = 1;
  s.max_depth_hi = 9;
  s.min_split_lo = 2;
  s.min_split_hi = 59;
  s.min_leaf_lo = 1;
  s.min_leaf_hi = 59;
  return s;
}

}  // namespace fairaudit
