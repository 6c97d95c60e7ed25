#include "fairaudit/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairaudit/error.hpp"
#include "fairaudit/rng.hpp"

namespace fairaudit {

namespace {

struct ClusteringView {
  std::vector<const std::vector<double>*> numeric;           // feature columns
  std::vector<const std::vector<std::int32_t>*> categorical;  // feature columns
  std::vector<std::size_t> cat_level_counts;
  std::size_t n = 0;
};

ClusteringView make_view(const Dataset& d) {
  ClusteringView v;
  v.n = d.n();
  for (std::size_t c = 0; c < d.column_count(); ++c) {
    const FeatureSpec& s = d.spec(c);
    if (s.role != FeatureRole::Feature) continue;
    if (s.kind == FeatureKind::Numeric) {
      v.numeric.push_back(&d.numeric_column(c));
    } else {
      v.categorical.push_back(&d.codes_column(c));
      v.cat_level_counts.push_back(s.levels.size());
    }
  }
  return v;
}

double default_gamma(const ClusteringView& v) {
  if (v.numeric.empty()) return 1.0;
  double mean_sd = 0.0;
  for (const auto* col : v.numeric) {
    double mean = 0.0;
    for (double x : *col) mean += x;
    mean /= static_cast<double>(col->size());
    double var = 0.0;
    for (double x : *col) var += (x - mean) * (x - mean);
    var /= static_cast<double>(col->size());
    mean_sd += std::sqrt(var);
  }
  mean_sd /= static_cast<double>(v.numeric.size());
  return 0.5 * mean_sd;
}

double distance(const ClusteringView& v, std::size_t row,
                const RiskClassAssignment::Prototype& p, double gamma) {
  double dist = 0.0;
  for (std::size_t j = 0; j < v.numeric.size(); ++j) {
    const double diff = (*v.numeric[j])[row] - p.numeric[j];
    dist += diff * diff;
  }
  for (std::size_t j = 0; j < v.categorical.size(); ++j) {
    if ((*v.categorical[j])[row] != p.modes[j]) dist += gamma;
  }
  return dist;
}

RiskClassAssignment::Prototype row_prototype(const ClusteringView& v,
                                             std::size_t row) {
  RiskClassAssignment::Prototype p;
  p.numeric.reserve(v.numeric.size());
  for (const auto* col : v.numeric) p.numeric.push_back((*col)[row]);
  p.modes.reserve(v.categorical.size());
  for (const auto* col : v.categorical) p.modes.push_back((*col)[row]);
  return p;
}

RiskClassAssignment run_lloyd(const ClusteringView& v,
                              std::vector<RiskClassAssignment::Prototype> protos,
                              double gamma, int max_iter) {
  const int k = static_cast<int>(protos.size());
  RiskClassAssignment out;
  out.class_count = k;
  out.gamma = gamma;
  out.labels.assign(v.n, -1);

  std::vector<int> labels(v.n, -1);
  std::vector<double> best_dist(v.n, 0.0);

  for (int iter = 0; iter < max_iter; ++iter) {
    // Assignment. Ties go to the lowest class index.
    std::vector<int> next(v.n);
    for (std::size_t i = 0; i < v.n; ++i) {
      int best = 0;
      double bd = distance(v, i, protos[0], gamma);
      for (int c = 1; c < k; ++c) {
        const double dc = distance(v, i, protos[c], gamma);
        if (dc < bd) {
          bd = dc;
          best = c;
        }
      }
      next[i] = best;
      best_dist[i] = bd;
    }
    // Re-seed empty classes from the farthest point.
    for (int c = 0; c < k; ++c) {
      if (std::count(next.begin(), next.end(), c) == 0) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < v.n; ++i) {
          if (best_dist[i] > best_dist[far]) far = i;
        }
        next[far] = c;
        best_dist[far] = 0.0;
        protos[c] = row_prototype(v, far);
      }
    }
    double objective = 0.0;
    for (std::size_t i = 0; i < v.n; ++i) {
      objective += distance(v, i, protos[static_cast<std::size_t>(next[i])], gamma);
    }
    out.objective_trace.push_back(objective);

    if (next == labels) break;
    labels = next;

    // Update: numeric centroid, categorical mode (lowest level wins ties).
    for (int c = 0; c < k; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < v.n; ++i) {
        if (labels[i] == c) members.push_back(i);
      }
      for (std::size_t j = 0; j < v.numeric.size(); ++j) {
        double mean = 0.0;
        for (std::size_t i : members) mean += (*v.numeric[j])[i];
        protos[c].numeric[j] = mean / static_cast<double>(members.size());
      }
      for (std::size_t j = 0; j < v.categorical.size(); ++j) {
        std::vector<long> counts(v.cat_level_counts[j], 0);
        for (std::size_t i : members) counts[(*v.categorical[j])[i]] += 1;
        std::int32_t mode = 0;
        for (std::size_t l = 1; l < counts.size(); ++l) {
          if (counts[l] > counts[mode]) mode = static_cast<std::int32_t>(l);
        }
        protos[c].modes[j] = mode;
      }
    }
  }

  out.labels = labels;
  out.prototypes = std::move(protos);
  for (int c = 0; c < k; ++c) {
    if (std::count(out.labels.begin(), out.labels.end(), c) == 0) {
      throw DataError("kprototypes: empty class after convergence");
    }
  }

  // Canonical numbering: classes ordered by decreasing size (ties by first
  // member), so the labeling does not depend on the initialization order.
  std::vector<long> sizes(k, 0);
  std::vector<std::size_t> first(k, v.n);
  for (std::size_t i = 0; i < v.n; ++i) {
    const int c = out.labels[i];
    if (sizes[c] == 0) first[c] = i;
    ++sizes[c];
  }
  std::vector<int> order(k);
  for (int c = 0; c < k; ++c) order[c] = c;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
    return first[a] < first[b];
  });
  std::vector<int> remap(k);
  for (int rank = 0; rank < k; ++rank) remap[order[rank]] = rank;
  for (int& label : out.labels) label = remap[label];
  std::vector<RiskClassAssignment::Prototype> reordered(k);
  for (int c = 0; c < k; ++c) reordered[remap[c]] = std::move(out.prototypes[c]);
  out.prototypes = std::move(reordered);
  return out;
}

}  // namespace

RiskClassAssignment kprototypes(const Dataset& d, int classes,
                                std::optional<double> gamma, std::uint64_t seed,
                                int max_iter) {
  if (classes < 2) throw DomainError("kprototypes: need at least 2 classes");
  if (static_cast<std::size_t>(classes) > d.n()) {
    throw DomainError("kprototypes: more classes than rows");
  }
  if (gamma && *gamma < 0.0) throw DomainError("kprototypes: gamma must be >= 0");

  const ClusteringView v = make_view(d);
  const double g = gamma ? *gamma : default_gamma(v);

  Rng rng(seed);
  const std::vector<std::size_t> pick =
      rng.sample_without_replacement(v.n, static_cast<std::size_t>(classes));
  std::vector<RiskClassAssignment::Prototype> protos;
  protos.reserve(pick.size());
  for (std::size_t row : pick) protos.push_back(row_prototype(v, row));

  return run_lloyd(v, std::move(protos), g, max_iter);
}

RiskClassAssignment kprototypes_from_prototypes(
    const Dataset& d, std::vector<RiskClassAssignment::Prototype> initial,
    std::optional<double> gamma, int max_iter) {
  if (initial.size() < 2) throw DomainError("kprototypes: need at least 2 classes");
  const ClusteringView v = make_view(d);
  const double g = gamma ? *gamma : default_gamma(v);
  return run_lloyd(v, std::move(initial), g, max_iter);
}

}  // namespace fairaudit
