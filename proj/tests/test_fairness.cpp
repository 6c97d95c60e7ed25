#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fairaudit/clustering.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/error.hpp"
#include "fairaudit/fairness.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/rng.hpp"
#include "oracles.hpp"

using namespace fairaudit;

namespace {

const std::string kGermanPath = std::string(FAIRAUDIT_DATA_DIR) + "/german.data";

void append_cells(std::vector<int>& a, std::vector<int>& b, int av, int bv,
                  long count) {
  for (long i = 0; i < count; ++i) {
    a.push_back(av);
    b.push_back(bv);
  }
}

struct GermanFixture {
  Dataset data = load_german_credit(kGermanPath);
  EncodedMatrix x = one_hot_encode(data, false);
  std::vector<int> y = data.target_values();
  std::vector<int> d = data.protected_values();
  std::vector<int> classes =
      kprototypes(data, 2, std::nullopt, Rng::substream(kDefaultSeed, "clustering"))
          .labels;
};

const GermanFixture& german() {
  static const GermanFixture f;
  return f;
}

}  // namespace

TEST_CASE("statistical parity on the worked single-stratum fixture") {
  std::vector<int> yhat, d;
  append_cells(yhat, d, 1, 0, 433);
  append_cells(yhat, d, 0, 0, 124);
  append_cells(yhat, d, 1, 1, 178);
  append_cells(yhat, d, 0, 1, 92);

  const FairnessReport r = test_statistical_parity(yhat, d, 0.05);
  CHECK(std::abs(r.global_statistic - 13.15) < 0.01);
  CHECK(r.global_dof == 1);
  CHECK(r.reject);

  SUBCASE("constant protected attribute is degenerate") {
    const std::vector<int> ones(yhat.size(), 1);
    const FairnessReport deg = test_statistical_parity(yhat, ones, 0.05);
    CHECK(deg.global_dof == 0);
    CHECK(deg.p_value == 1.0);
    CHECK_FALSE(deg.reject);
  }
  SUBCASE("exactly proportional counts give statistic zero") {
    std::vector<int> a, b;
    append_cells(a, b, 1, 1, 60);
    append_cells(a, b, 1, 0, 90);
    append_cells(a, b, 0, 1, 40);
    append_cells(a, b, 0, 0, 60);
    const FairnessReport zero = test_statistical_parity(a, b, 0.05);
    CHECK(zero.global_statistic == 0.0);
    CHECK(zero.p_value == 1.0);
  }
}

TEST_CASE("conditional parity aggregates per-class statistics") {
  // Class 0 carries the worked counts; class 1 is independent by design.
  std::vector<int> yhat, d, classes;
  append_cells(yhat, d, 1, 0, 433);
  append_cells(yhat, d, 0, 0, 124);
  append_cells(yhat, d, 1, 1, 178);
  append_cells(yhat, d, 0, 1, 92);
  classes.assign(yhat.size(), 0);
  append_cells(yhat, d, 1, 1, 30);
  append_cells(yhat, d, 1, 0, 30);
  append_cells(yhat, d, 0, 1, 10);
  append_cells(yhat, d, 0, 0, 10);
  classes.resize(yhat.size(), 1);

  const FairnessReport r = test_conditional_parity(yhat, d, classes, 0.05);
  REQUIRE(r.per_stratum.size() == 2);
  CHECK(r.per_stratum[0].label == "Class 1");
  CHECK(std::abs(r.per_stratum[0].chi2.statistic - 13.15) < 0.01);
  CHECK(r.per_stratum[1].chi2.statistic == 0.0);
  CHECK(r.global_dof == 2);
  // Additivity is exact.
  CHECK(r.global_statistic ==
        r.per_stratum[0].chi2.statistic + r.per_stratum[1].chi2.statistic);

  SUBCASE("a degenerate class contributes neither statistic nor dof") {
    std::vector<int> yh2 = yhat, d2 = d, cl2 = classes;
    for (std::size_t i = 0; i < yh2.size(); ++i) {
      if (cl2[i] == 1) yh2[i] = 1;  // all favorable in class 1
    }
    const FairnessReport deg = test_conditional_parity(yh2, d2, cl2, 0.05);
    CHECK(deg.global_dof == 1);
    CHECK(deg.global_statistic == deg.per_stratum[0].chi2.statistic);
    CHECK(deg.per_stratum[1].chi2.degenerate);
  }
}

TEST_CASE("equal odds and its relaxations") {
  SUBCASE("a perfectly accurate scorer is never flagged") {
    std::vector<int> y, d;
    Rng rng(3);
    for (int i = 0; i < 400; ++i) {
      y.push_back(static_cast<int>(rng.uniform_int(2)));
      d.push_back(static_cast<int>(rng.uniform_int(2)));
    }
    const FairnessReport r = test_equal_odds(y, y, d, 0.05);
    CHECK_FALSE(r.reject);
    CHECK(r.global_statistic == 0.0);
  }
  SUBCASE("unequal true-positive rates are detected") {
    // Within Y=1: group 1 sees 225/250 favorable, group 0 sees 125/250.
    // Within Y=0: both groups see a 0.2 false-positive rate.
    std::vector<int> yhat, d, y;
    auto block = [&](int yv, int dv, int yhv, long count) {
      for (long i = 0; i < count; ++i) {
        y.push_back(yv);
        d.push_back(dv);
        yhat.push_back(yhv);
      }
    };
    block(1, 1, 1, 225);
    block(1, 1, 0, 25);
    block(1, 0, 1, 125);
    block(1, 0, 0, 125);
    block(0, 1, 1, 50);
    block(0, 1, 0, 200);
    block(0, 0, 1, 50);
    block(0, 0, 0, 200);

    ContingencyStratum y1;
    y1.n[1][1] = 225;
    y1.n[0][1] = 25;
    y1.n[1][0] = 125;
    y1.n[0][0] = 125;
    const double expected_y1 = oracles::pearson_2x2_closed_form(y1);

    const FairnessReport eo = test_equal_odds(yhat, y, d, 0.05);
    CHECK(eo.reject);
    CHECK(eo.global_statistic ==
          doctest::Approx(expected_y1).epsilon(1e-12));  // Y=0 adds zero

    const FairnessReport eop = test_equal_opportunity(yhat, y, d, 0.05);
    CHECK(eop.global_statistic == doctest::Approx(expected_y1).epsilon(1e-12));
    CHECK(eop.reject);

    const FairnessReport pe = test_predictive_equality(yhat, y, d, 0.05);
    CHECK(pe.global_statistic == 0.0);
    CHECK_FALSE(pe.reject);

    // The equal-odds statistic decomposes exactly.
    CHECK(eo.global_statistic ==
          eop.global_statistic + pe.global_statistic);
  }
  SUBCASE("missing outcome strata are errors") {
    const std::vector<int> ones(50, 1), alt = [] {
      std::vector<int> v(50, 0);
      for (std::size_t i = 0; i < v.size(); i += 2) v[i] = 1;
      return v;
    }();
    CHECK_THROWS_AS(test_equal_odds(alt, ones, alt, 0.05), DataError);
    const std::vector<int> zeros(50, 0);
    CHECK_THROWS_AS(test_equal_opportunity(alt, zeros, alt, 0.05), DataError);
    CHECK_THROWS_AS(test_predictive_equality(alt, ones, alt, 0.05), DataError);
  }
}

TEST_CASE("group relabeling leaves every statistic unchanged") {
  Rng rng(77);
  std::vector<int> yhat, y, d, classes;
  for (int i = 0; i < 600; ++i) {
    yhat.push_back(static_cast<int>(rng.uniform_int(2)));
    y.push_back(static_cast<int>(rng.uniform_int(2)));
    d.push_back(static_cast<int>(rng.uniform_int(2)));
    classes.push_back(static_cast<int>(rng.uniform_int(3)));
  }
  std::vector<int> d_flipped(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) d_flipped[i] = 1 - d[i];

  for (Hypothesis h : {Hypothesis::SP, Hypothesis::CSP, Hypothesis::EO,
                       Hypothesis::EOP, Hypothesis::PE}) {
    const FairnessReport a = run_fairness_test(h, yhat, y, d, classes, 0.05);
    const FairnessReport b =
        run_fairness_test(h, yhat, y, d_flipped, classes, 0.05);
    CHECK(a.global_statistic == b.global_statistic);
    CHECK(a.p_value == b.p_value);
  }
}

TEST_CASE("duplicating the sample scales statistics exactly") {
  Rng rng(13);
  std::vector<int> yhat, y, d, classes;
  for (int i = 0; i < 250; ++i) {
    yhat.push_back(static_cast<int>(rng.uniform_int(2)));
    y.push_back(static_cast<int>(rng.uniform_int(2)));
    d.push_back(static_cast<int>(rng.uniform_int(2)));
    classes.push_back(static_cast<int>(rng.uniform_int(2)));
  }
  for (int m : {2, 4}) {
    std::vector<int> yhat_m, y_m, d_m, classes_m;
    for (int copy = 0; copy < m; ++copy) {
      yhat_m.insert(yhat_m.end(), yhat.begin(), yhat.end());
      y_m.insert(y_m.end(), y.begin(), y.end());
      d_m.insert(d_m.end(), d.begin(), d.end());
      classes_m.insert(classes_m.end(), classes.begin(), classes.end());
    }
    for (Hypothesis h : {Hypothesis::SP, Hypothesis::CSP, Hypothesis::EO,
                         Hypothesis::EOP, Hypothesis::PE}) {
      const FairnessReport base = run_fairness_test(h, yhat, y, d, classes, 0.05);
      const FairnessReport big =
          run_fairness_test(h, yhat_m, y_m, d_m, classes_m, 0.05);
      CHECK(big.global_statistic == static_cast<double>(m) * base.global_statistic);
    }
  }
}

TEST_CASE("rejection frequency under independence matches the level") {
  // Null everywhere: all four sequences independent. 3000 replicates keep
  // this test quick; the acceptance suite runs the full-size check.
  Rng rng(424242);
  const int replicates = 3000;
  const std::size_t n = 400;
  int rejects[5] = {0, 0, 0, 0, 0};
  for (int rep = 0; rep < replicates; ++rep) {
    std::vector<int> yhat(n), y(n), d(n), classes(n);
    for (std::size_t i = 0; i < n; ++i) {
      yhat[i] = rng.uniform_real() < 0.6 ? 1 : 0;
      y[i] = rng.uniform_real() < 0.7 ? 1 : 0;
      d[i] = rng.uniform_real() < 0.31 ? 1 : 0;
      classes[i] = static_cast<int>(rng.uniform_int(2));
    }
    int k = 0;
    for (Hypothesis h : {Hypothesis::SP, Hypothesis::CSP, Hypothesis::EO,
                         Hypothesis::EOP, Hypothesis::PE}) {
      rejects[k++] +=
          run_fairness_test(h, yhat, y, d, classes, 0.05).reject ? 1 : 0;
    }
  }
  // 99% binomial band around 0.05 at 3000 replicates is roughly +-0.0103.
  for (int k = 0; k < 5; ++k) {
    const double rate = static_cast<double>(rejects[k]) / replicates;
    CHECK(std::abs(rate - 0.05) < 0.011);
  }
}

TEST_CASE("audit of the frozen reference models") {
  const GermanFixture& g = german();

  SUBCASE("narrow-search tree: rejected on four of five tests") {
    const TreeModel prime = train_tree(g.x, g.y, tree_prime_preset());
    const AuditResult a = audit(prime, g.x, g.y, g.d, 0.5, 0.05, g.classes);
    REQUIRE(a.reports.size() == 5);
    CHECK(a.report(Hypothesis::SP).reject);
    CHECK(a.report(Hypothesis::CSP).reject);
    CHECK(a.report(Hypothesis::EO).reject);
    CHECK(a.report(Hypothesis::EOP).reject);
    CHECK_FALSE(a.report(Hypothesis::PE).reject);

    // Frozen values, pinned to ten decimals.
    CHECK(std::abs(a.report(Hypothesis::SP).p_value - 0.0215966092) < 1e-9);
    CHECK(std::abs(a.report(Hypothesis::CSP).p_value - 0.0153103549) < 1e-9);
    CHECK(std::abs(a.report(Hypothesis::EO).p_value - 0.0363019213) < 1e-9);
    CHECK(std::abs(a.report(Hypothesis::EOP).p_value - 0.0101355612) < 1e-9);
    CHECK(std::abs(a.report(Hypothesis::PE).p_value - 0.8851747627) < 1e-9);

    const FairnessReport& csp = a.report(Hypothesis::CSP);
    REQUIRE(csp.per_stratum.size() == 2);
    CHECK(csp.per_stratum[0].counts.total() == 827);
    CHECK(std::abs(csp.per_stratum[0].chi2.p_value - 0.0551887404) < 1e-9);
    CHECK(std::abs(csp.per_stratum[1].chi2.p_value - 0.0304788665) < 1e-9);
    CHECK(csp.any_stratum_rejects);
    CHECK_FALSE(csp.majority_of_strata_reject);

    SUBCASE("serialized report structure") {
      const std::string json_text = audit_to_json(a);
      CHECK(json_text.find("\"SP\"") != std::string::npos);
      CHECK(json_text.find("\"strata\"") != std::string::npos);
      const std::string csv = audit_to_csv(a);
      CHECK(csv.find("Cond. parity Class 1") != std::string::npos);
      CHECK(csv.find("Cond. parity (global)") != std::string::npos);
      CHECK(csv.find("Predictive equality") != std::string::npos);
    }
  }

  SUBCASE("wide-search tree: no rejection anywhere") {
    const TreeModel tree =
        train_tree(g.x, g.y, tree_preset(), Rng::substream(kDefaultSeed, "tree"));
    const AuditResult a = audit(tree, g.x, g.y, g.d, 0.5, 0.05, g.classes);
    for (const auto& r : a.reports) CHECK_FALSE(r.reject);
  }

  SUBCASE("scorer trained on the protected attribute fails parity") {
    const EncodedMatrix xg = one_hot_encode(g.data, true);
    const LogisticModel lr = train_logistic(xg, g.y, 0.0);
    const AuditResult a = audit(lr, xg, g.y, g.d, 0.5, 0.05, g.classes);
    CHECK(a.report(Hypothesis::SP).reject);
    CHECK(a.report(Hypothesis::SP).p_value < 0.05);
  }
}
