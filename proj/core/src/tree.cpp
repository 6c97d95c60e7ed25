#include <algorithm>
#include <cmath>
#include <vector>

#include "fairaudit/error.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/rng.hpp"

namespace fairaudit {

namespace {

double impurity(SplitCriterion criterion, long pos, long total) {
  if (total == 0) return 0.0;
  const double p1 = static_cast<double>(pos) / static_cast<double>(total);
  const double p0 = 1.0 - p1;
  if (criterion == SplitCriterion::Gini) {
    return 1.0 - p1 * p1 - p0 * p0;
  }
  double h = 0.0;
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  return h;
}

struct BestSplit {
  bool found = false;
  int column = -1;
  double threshold = 0.0;
  double improvement = -1.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const EncodedMatrix& x, std::span<const int> y,
              const TreeHyperparams& h, std::uint64_t seed)
      : x_(x), y_(y), h_(h), rng_(seed) {
    switch (h.features_per_split) {
      case FeatureSampling::All:
        candidates_ = x.cols;
        break;
      case FeatureSampling::Sqrt:
        candidates_ = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::sqrt(static_cast<double>(x.cols))));
        break;
      case FeatureSampling::Log2:
        candidates_ = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::log2(static_cast<double>(x.cols))));
        break;
    }
  }

  TreeModel build() {
    TreeModel model;
    model.params = h_;
    model.columns = x_.column_names;
    std::vector<std::size_t> all(x_.rows);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    grow(model, all, 0);
    return model;
  }

 private:
  int grow(TreeModel& model, std::vector<std::size_t>& rows, int depth) {
    const long total = static_cast<long>(rows.size());
    long pos = 0;
    for (std::size_t i : rows) pos += y_[i];

    const int node_id = static_cast<int>(model.nodes.size());
    TreeModel::Node node;
    node.samples = total;
    node.probability = static_cast<double>(pos) / static_cast<double>(total);
    model.nodes.push_back(node);

    const bool splittable = depth < h_.max_depth &&
                            total >= static_cast<long>(h_.min_split) &&
                            total >= 2L * h_.min_leaf && pos != 0 && pos != total;
    if (!splittable) return node_id;

    const BestSplit best = find_best_split(rows, pos, total);
    if (!best.found || best.improvement < h_.min_impurity_decrease) return node_id;

    std::vector<std::size_t> left, right;
    left.reserve(rows.size());
    right.reserve(rows.size());
    for (std::size_t i : rows) {
      if (x_.at(i, static_cast<std::size_t>(best.column)) <= best.threshold) {
        left.push_back(i);
      } else {
        right.push_back(i);
      }
    }
    rows.clear();
    rows.shrink_to_fit();

    model.nodes[node_id].column = best.column;
    model.nodes[node_id].threshold = best.threshold;
    model.nodes[node_id].left = grow(model, left, depth + 1);
    model.nodes[node_id].right = grow(model, right, depth + 1);
    return node_id;
  }

  BestSplit find_best_split(const std::vector<std::size_t>& rows, long pos,
                            long total) {
    std::vector<std::size_t> columns;
    if (candidates_ >= x_.cols) {
      columns.resize(x_.cols);
      for (std::size_t c = 0; c < x_.cols; ++c) columns[c] = c;
    } else {
      columns = rng_.sample_without_replacement(x_.cols, candidates_);
      std::sort(columns.begin(), columns.end());
    }

    const double node_impurity = impurity(h_.criterion, pos, total);
    const double node_weight =
        static_cast<double>(total) / static_cast<double>(x_.rows);

    BestSplit best;
    std::vector<std::pair<double, int>> vals;
    vals.reserve(rows.size());
    for (std::size_t col : columns) {
      vals.clear();
      for (std::size_t i : rows) {
        vals.emplace_back(x_.at(i, col), y_[i]);
      }
      std::sort(vals.begin(), vals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      long left_pos = 0;
      for (long nl = 1; nl < total; ++nl) {
        left_pos += vals[static_cast<std::size_t>(nl - 1)].second;
        const double v_prev = vals[static_cast<std::size_t>(nl - 1)].first;
        const double v_next = vals[static_cast<std::size_t>(nl)].first;
        if (v_next <= v_prev) continue;  // not a boundary between distinct values
        if (nl < h_.min_leaf || total - nl < h_.min_leaf) continue;

        const long nr = total - nl;
        const double imp_l = impurity(h_.criterion, left_pos, nl);
        const double imp_r = impurity(h_.criterion, pos - left_pos, nr);
        const double decrease =
            node_impurity -
            (static_cast<double>(nl) / static_cast<double>(total)) * imp_l -
            (static_cast<double>(nr) / static_cast<double>(total)) * imp_r;
        const double improvement = std::max(node_weight * decrease, 0.0);
        if (improvement > best.improvement) {
          double threshold = 0.5 * (v_prev + v_next);
          if (threshold == v_next) threshold = v_prev;  // midpoint rounded up
          best.found = true;
          best.column = static_cast<int>(col);
          best.threshold = threshold;
          best.improvement = improvement;
        }
      }
    }
    return best;
  }

  const EncodedMatrix& x_;
  std::span<const int> y_;
  const TreeHyperparams& h_;
  Rng rng_;
  std::size_t candidates_ = 0;
};

}  // namespace

double TreeModel::predict_proba(std::span<const double> row) const {
  int cur = 0;
  while (nodes[static_cast<std::size_t>(cur)].left >= 0) {
    const Node& n = nodes[static_cast<std::size_t>(cur)];
    cur = row[static_cast<std::size_t>(n.column)] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(cur)].probability;
}

std::vector<std::size_t> TreeModel::columns_used() const {
  std::vector<std::size_t> cols;
  for (const Node& n : nodes) {
    if (n.left >= 0) cols.push_back(static_cast<std::size_t>(n.column));
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

int TreeModel::depth() const {
  std::vector<std::pair<int, int>> stack = {{0, 0}};
  int max_depth = 0;
  while (!stack.empty()) {
    const auto [id, d] = stack.back();
    stack.pop_back();
    max_depth = std::max(max_depth, d);
    const Node& n = nodes[static_cast<std::size_t>(id)];
    if (n.left >= 0) {
      stack.push_back({n.left, d + 1});
      stack.push_back({n.right, d + 1});
    }
  }
  return max_depth;
}

long TreeModel::leaf_count() const {
  long leaves = 0;
  for (const Node& n : nodes) leaves += (n.left < 0);
  return leaves;
}

TreeModel train_tree(const EncodedMatrix& x, std::span<const int> y,
                     const TreeHyperparams& h, std::uint64_t seed) {
  if (x.rows != y.size()) throw DataError("train_tree: shape mismatch");
  if (x.rows == 0) throw DataError("train_tree: empty data");
  if (h.max_depth < 1 || h.min_split < 2 || h.min_leaf < 1 ||
      h.min_impurity_decrease < 0.0) {
    throw DomainError("train_tree: hyperparameters outside their ranges");
  }
  return TreeBuilder(x, y, h, seed).build();
}

}  // namespace fairaudit
