#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fairaudit/clustering.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/error.hpp"
#include "fairaudit/fairness.hpp"
#include "fairaudit/fpdp.hpp"
#include "fairaudit/mitigation.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/rng.hpp"

using namespace fairaudit;

namespace {

const std::string kGermanPath = std::string(FAIRAUDIT_DATA_DIR) + "/german.data";

struct GermanFixture {
  Dataset data = load_german_credit(kGermanPath);
  EncodedMatrix x = one_hot_encode(data, false);
  std::vector<int> y = data.target_values();
  std::vector<int> d = data.protected_values();
  std::vector<int> classes =
      kprototypes(data, 2, std::nullopt, Rng::substream(kDefaultSeed, "clustering"))
          .labels;
  TreeModel prime = train_tree(x, y, tree_prime_preset());

  FpdpContext ctx() const { return {prime, x, y, d, classes, 0.5, 0.10}; }
};

const GermanFixture& german() {
  static const GermanFixture f;
  return f;
}

MitigationRow synthetic_row(const std::string& strategy, double auc, double pcc) {
  MitigationRow r;
  r.strategy = strategy;
  r.auc_score = auc;
  r.pcc_score = pcc;
  return r;
}

}  // namespace

TEST_CASE("value fixing agrees with the sweep grid point bit for bit") {
  const GermanFixture& g = german();
  const FpdpCurve sp = fpdp_categorical(g.ctx(), "Telephone", Hypothesis::SP);
  const FpdpCurve csp = fpdp_categorical(g.ctx(), "Telephone", Hypothesis::CSP);
  const FpdpCurve eo = fpdp_categorical(g.ctx(), "Telephone", Hypothesis::EO);
  const FpdpCurve eop = fpdp_categorical(g.ctx(), "Telephone", Hypothesis::EOP);

  const MitigationRow row = mitigate_fix_value(g.ctx(), "Telephone", "A192", 0.10);
  CHECK(row.p_sp == sp.grid[1].p_value);
  CHECK(row.p_csp == csp.grid[1].p_value);
  CHECK(row.p_eo == eo.grid[1].p_value);
  CHECK(row.p_eop == eop.grid[1].p_value);
}

TEST_CASE("frozen reference rows for value fixing") {
  const GermanFixture& g = german();

  SUBCASE("forcing everyone onto a registered line clears all four tests") {
    const MitigationRow row =
        mitigate_fix_value(g.ctx(), "Telephone", "A192", 0.10);
    CHECK(row.p_sp > 0.10);
    CHECK(row.p_csp > 0.10);
    CHECK(row.p_eop > 0.10);
    CHECK(row.p_eo > 0.10);
    CHECK(row.fair);
    CHECK(std::abs(row.auc_score - 0.8325) < 0.005);
    CHECK(std::abs(row.pcc_score - 77.8) < 1.0);
    CHECK(row.strategy == "fix(Telephone=A192)");
  }

  SUBCASE("fixing a feature the model ignores changes nothing") {
    const std::vector<int> yhat = classify(g.prime, g.x, 0.5);
    const FairnessReport base_sp = test_statistical_parity(yhat, g.d, 0.10);
    const std::vector<double> base_scores = g.prime.predict_proba_all(g.x);

    const MitigationRow row =
        mitigate_fix_value(g.ctx(), "Guarantor", "A101", 0.10);
    CHECK(row.p_sp == base_sp.p_value);
    CHECK(row.auc_score == auc(g.y, base_scores));
    CHECK_FALSE(row.fair);
  }

  SUBCASE("unknown values are rejected") {
    CHECK_THROWS_AS(mitigate_fix_value(g.ctx(), "Telephone", "A999", 0.10),
                    DataError);
    CHECK_THROWS_AS(mitigate_fix_value(g.ctx(), "CreditDuration", "abc", 0.10),
                    DataError);
    CHECK_THROWS_AS(mitigate_fix_value(g.ctx(), "NoSuchFeature", "1", 0.10),
                    DataError);
  }

  SUBCASE("the model is untouched by value fixing") {
    const std::string before = serialize_model(g.prime);
    (void)mitigate_fix_value(g.ctx(), "Telephone", "A192", 0.10);
    CHECK(serialize_model(g.prime) == before);
  }
}

TEST_CASE("re-estimation after dropping a feature") {
  const GermanFixture& g = german();

  SUBCASE("dropping the telephone line keeps conditional parity rejected") {
    const MitigationRow row = mitigate_reestimate(
        tree_prime_preset(), g.ctx(), "Telephone", 0.10,
        Rng::substream(kDefaultSeed, "tree"));
    CHECK(row.reestimated);
    CHECK(std::abs(row.auc_score - 0.8380) < 5e-4);
    CHECK(row.p_csp < 0.10);
    CHECK_FALSE(row.fair);
  }

  SUBCASE("dropping an unused feature reproduces the baseline audit") {
    const MitigationRow row = mitigate_reestimate(
        tree_prime_preset(), g.ctx(), "Guarantor", 0.10,
        Rng::substream(kDefaultSeed, "tree"));
    const std::vector<int> yhat = classify(g.prime, g.x, 0.5);
    const FairnessReport base_sp = test_statistical_parity(yhat, g.d, 0.10);
    CHECK(row.p_sp == base_sp.p_value);
    CHECK(row.auc_score == auc(g.y, g.prime.predict_proba_all(g.x)));
  }

  SUBCASE("logistic retraining path") {
    const LogisticModel lr = train_logistic(g.x, g.y, 0.0);
    const FpdpContext ctx{lr, g.x, g.y, g.d, g.classes, 0.5, 0.10};
    const MitigationRow row =
        mitigate_reestimate_logistic(0.0, ctx, "Telephone", 0.10);
    CHECK(row.reestimated);
    CHECK(row.auc_score > 0.75);
  }
}

TEST_CASE("trade-off table ordering") {
  SUBCASE("sorted by decreasing discrimination") {
    std::vector<MitigationRow> rows = {synthetic_row("a", 0.83, 70.0),
                                       synthetic_row("b", 0.80, 71.0),
                                       synthetic_row("c", 0.82, 72.0)};
    const TradeoffTable t = tradeoff_table(rows);
    CHECK(t.rows[0].strategy == "a");
    CHECK(t.rows[1].strategy == "c");
    CHECK(t.rows[2].strategy == "b");
  }
  SUBCASE("ties break on accuracy, then the strategy label") {
    std::vector<MitigationRow> rows = {synthetic_row("z", 0.8, 70.0),
                                       synthetic_row("y", 0.8, 71.0),
                                       synthetic_row("x", 0.8, 70.0)};
    const TradeoffTable t = tradeoff_table(rows);
    CHECK(t.rows[0].strategy == "y");
    CHECK(t.rows[1].strategy == "x");
    CHECK(t.rows[2].strategy == "z");
  }
  SUBCASE("a single row is its own table") {
    const TradeoffTable t = tradeoff_table({synthetic_row("only", 0.5, 50.0)});
    CHECK(t.rows.size() == 1);
  }
  SUBCASE("no rows is an error") {
    CHECK_THROWS_AS(tradeoff_table({}), DataError);
  }
}

TEST_CASE("identical prediction vectors are grouped") {
  const GermanFixture& g = german();
  std::vector<MitigationRow> rows;
  for (const char* v : {"A30", "A31", "A32", "A33", "A34"}) {
    rows.push_back(mitigate_fix_value(g.ctx(), "CreditHistory", v, 0.10));
  }
  for (const char* v : {"A61", "A62", "A63", "A64", "A65"}) {
    rows.push_back(mitigate_fix_value(g.ctx(), "Savings", v, 0.10));
  }
  const TradeoffTable t = tradeoff_table(rows);

  auto class_of = [&](const std::string& strategy) -> int {
    for (std::size_t gidx = 0; gidx < t.equivalence_classes.size(); ++gidx) {
      for (std::size_t i : t.equivalence_classes[gidx]) {
        if (t.rows[i].strategy == strategy) return static_cast<int>(gidx);
      }
    }
    return -1;
  };
  // The credit-history levels A30/A33/A34 produce one label vector, and the
  // non-trivial savings levels A62..A65 another.
  const int history_class = class_of("fix(CreditHistory=A30)");
  CHECK(history_class >= 0);
  CHECK(class_of("fix(CreditHistory=A33)") == history_class);
  CHECK(class_of("fix(CreditHistory=A34)") == history_class);
  CHECK(class_of("fix(CreditHistory=A32)") != history_class);

  const int savings_class = class_of("fix(Savings=A62)");
  CHECK(savings_class >= 0);
  CHECK(class_of("fix(Savings=A63)") == savings_class);
  CHECK(class_of("fix(Savings=A64)") == savings_class);
  CHECK(class_of("fix(Savings=A65)") == savings_class);

  SUBCASE("serialized table carries the groups") {
    const std::string csv = tradeoff_to_csv(t);
    CHECK(csv.find("strategy,sp,csp_global,eop,eo,pe,auc,pcc,fair,equivalence_class") == 0);
    const std::string json_text = tradeoff_to_json(t);
    CHECK(json_text.find("equivalence_classes") != std::string::npos);
  }
}
