#include "fairaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fairaudit/error.hpp"

namespace fairaudit {

ContingencyTable build_table(std::span<const int> a, std::span<const int> b,
                             std::span<const int> strata,
                             std::span<const std::string> stratum_names) {
  if (a.size() != b.size() || a.size() != strata.size()) {
    throw DataError("build_table: sequence lengths differ (" +
                    std::to_string(a.size()) + ", " + std::to_string(b.size()) +
                    ", " + std::to_string(strata.size()) + ")");
  }
  std::map<int, ContingencyStratum> by_label;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] != 0 && a[i] != 1) || (b[i] != 0 && b[i] != 1)) {
      throw DataError("build_table: non-binary value at row " + std::to_string(i));
    }
    by_label[strata[i]].n[a[i]][b[i]] += 1;
  }
  ContingencyTable table;
  for (auto& [value, stratum] : by_label) {
    if (static_cast<std::size_t>(value) < stratum_names.size() && value >= 0) {
      stratum.label = stratum_names[static_cast<std::size_t>(value)];
    } else {
      stratum.label = std::to_string(value);
    }
    table.strata.push_back(std::move(stratum));
  }
  return table;
}

ChiSquareResult pearson_chi2_stratum(const ContingencyStratum& s) {
  const long total = s.total();
  if (total == 0) throw DataError("pearson_chi2_stratum: empty stratum");
  if (s.degenerate()) return {0.0, 0, 1.0, true};

  // The four cell terms are accumulated in sorted order, which makes the
  // statistic bit-identical under any relabeling of either variable.
  std::array<double, 4> terms{};
  std::size_t k = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double expected =
          static_cast<double>(s.a_margin(a)) * static_cast<double>(s.b_margin(b)) /
          static_cast<double>(total);
      if (expected > 0.0) {
        const double diff = static_cast<double>(s.n[a][b]) - expected;
        terms[k++] = diff * diff / expected;
      }
    }
  }
  std::sort(terms.begin(), terms.begin() + k);
  double stat = 0.0;
  for (std::size_t i = 0; i < k; ++i) stat += terms[i];
  return {stat, 1, chi2_sf(stat, 1), false};
}

namespace detail {

double regularized_gamma_q(double a, double x) {
  constexpr double kTol = 1e-14;
  constexpr int kMaxIter = 1000;
  if (x < 0.0 || a <= 0.0) throw DomainError("regularized_gamma_q: bad arguments");
  if (x == 0.0) return 1.0;

  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series: P(a,x) = x^a e^-x / Gamma(a) * sum x^n / (a)_{n+1}
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * kTol) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  // Upper continued fraction (modified Lentz).
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kTol) break;
  }
  return h * std::exp(log_prefix);
}

}  // namespace detail

double chi2_sf(double x, int dof) {
  if (dof < 1) throw DomainError("chi2_sf: dof must be >= 1");
  if (x < 0.0) throw DomainError("chi2_sf: x must be >= 0");
  if (x == 0.0) return 1.0;
  return detail::regularized_gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_quantile(double p, int dof) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("chi2_quantile: p must lie in (0,1)");
  if (dof < 1) throw DomainError("chi2_quantile: dof must be >= 1");
  const double target_sf = 1.0 - p;

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(dof));
  while (chi2_sf(hi, dof) > target_sf) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (chi2_sf(mid, dof) > target_sf) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double cramers_v(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) throw DataError("cramers_v: sequence lengths differ");
  if (x.empty()) throw DataError("cramers_v: empty input");

  std::map<int, int> xl, yl;
  for (int v : x) xl.emplace(v, 0);
  for (int v : y) yl.emplace(v, 0);
  {
    int i = 0;
    for (auto& [v, idx] : xl) idx = i++;
    i = 0;
    for (auto& [v, idx] : yl) idx = i++;
  }
  const std::size_t r = xl.size(), c = yl.size();
  if (r < 2 || c < 2) throw DataError("cramers_v: variable has a single observed level");

  std::vector<long> counts(r * c, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    counts[static_cast<std::size_t>(xl[x[i]]) * c +
           static_cast<std::size_t>(yl[y[i]])] += 1;
  }
  std::vector<long> row(r, 0), col(c, 0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      row[i] += counts[i * c + j];
      col[j] += counts[i * c + j];
    }
  }
  const double n = static_cast<double>(x.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double expected = static_cast<double>(row[i]) *
                              static_cast<double>(col[j]) / n;
      // Observed levels always have positive margins, so expected > 0 here.
      const double diff = static_cast<double>(counts[i * c + j]) - expected;
      stat += diff * diff / expected;
    }
  }
  const double denom = n * static_cast<double>(std::min(r, c) - 1);
  return std::sqrt(stat / denom);
}

}  // namespace fairaudit
