#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fairaudit {

/// One 2x2 stratum of a stratified contingency table. Counts are indexed as
/// n[a][b] with a, b in {0, 1} being the observed values of the two binary
/// variables under test.
struct ContingencyStratum {
  std::string label;
  std::array<std::array<long, 2>, 2> n{{{0, 0}, {0, 0}}};

  long a_margin(int a) const { return n[a][0] + n[a][1]; }
  long b_margin(int b) const { return n[0][b] + n[1][b]; }
  long total() const { return n[0][0] + n[0][1] + n[1][0] + n[1][1]; }

  /// A stratum is degenerate when either variable is constant within it
  /// (a zero margin); the independence statistic is then undefined and the
  /// stratum contributes no evidence against the null.
  bool degenerate() const {
    return a_margin(0) == 0 || a_margin(1) == 0 || b_margin(0) == 0 ||
           b_margin(1) == 0;
  }
};

struct ContingencyTable {
  std::vector<ContingencyStratum> strata;

  long total() const {
    long t = 0;
    for (const auto& s : strata) t += s.total();
    return t;
  }
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool degenerate = false;
};

/// Builds one 2x2 stratum per distinct value of `strata`, in ascending value
/// order. `a` and `b` must be 0/1 sequences of the same length as `strata`.
/// `stratum_names`, when non-empty, maps a stratum value to its display label.
ContingencyTable build_table(std::span<const int> a, std::span<const int> b,
                             std::span<const int> strata,
                             std::span<const std::string> stratum_names = {});

/// Pearson chi-squared statistic for one stratum, expected counts
/// E[a][b] = a_margin * b_margin / total. Degenerate strata yield
/// statistic 0, dof 0, p-value 1 and the degenerate flag.
ChiSquareResult pearson_chi2_stratum(const ContingencyStratum& s);

/// Upper-tail probability of the chi-squared distribution with `dof` degrees
/// of freedom, via the regularized upper incomplete gamma Q(dof/2, x/2).
/// Absolute error below 1e-12 over the tested range.
double chi2_sf(double x, int dof);

/// Inverse of chi2_sf in its first argument: the x with
/// chi2_sf(x, dof) == 1 - p. Bracketing plus bisection on chi2_sf.
double chi2_quantile(double p, int dof);

/// Cramer's V association between two categorical sequences given as level
/// codes. Ranges from 0 (independence) to 1 (complete association).
/// Continuous variables must be binned by the caller first.
double cramers_v(std::span<const int> x, std::span<const int> y);

namespace detail {
/// Regularized upper incomplete gamma Q(a, x). Series expansion below
/// a + 1, Lentz continued fraction above, 1e-14 convergence tolerance.
double regularized_gamma_q(double a, double x);
}  // namespace detail

}  // namespace fairaudit
