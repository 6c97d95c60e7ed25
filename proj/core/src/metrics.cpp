#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fairaudit/error.hpp"
#include "fairaudit/models.hpp"

namespace fairaudit {

std::vector<double> Classifier::predict_proba_all(const EncodedMatrix& m) const {
  std::vector<double> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = predict_proba(m.row(r));
  return out;
}

std::vector<int> classify_scores(std::span<const double> scores, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("classify: delta must lie in (0,1)");
  }
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] > delta ? 1 : 0;
  return out;
}

std::vector<int> classify(const Classifier& c, const EncodedMatrix& x, double delta) {
  const std::vector<double> scores = c.predict_proba_all(x);
  return classify_scores(scores, delta);
}

double pcc(std::span<const int> y, std::span<const int> yhat) {
  if (y.size() != yhat.size()) throw DataError("pcc: sequence lengths differ");
  if (y.empty()) throw DataError("pcc: empty input");
  long matches = 0;
  for (std::size_t i = 0; i < y.size(); ++i) matches += (y[i] == yhat[i]);
  return 100.0 * static_cast<double>(matches) / static_cast<double>(y.size());
}

double auc(std::span<const int> y, std::span<const double> scores) {
  if (y.size() != scores.size()) throw DataError("auc: sequence lengths differ");
  const std::size_t n = y.size();
  long n_pos = 0;
  for (int v : y) n_pos += v;
  const long n_neg = static_cast<long>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DataError("auc: both classes required");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Sum of doubled average ranks of the positives; tie groups share the mean
  // rank, so every term is an integer and the sum is exact.
  std::int64_t doubled_rank_sum = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const std::int64_t doubled_rank = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (y[order[k]]) doubled_rank_sum += doubled_rank;
    }
    i = j;
  }
  const std::int64_t numerator =
      doubled_rank_sum - static_cast<std::int64_t>(n_pos) * (n_pos + 1);
  return static_cast<double>(numerator) /
         (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace fairaudit
