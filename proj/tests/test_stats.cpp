#include <doctest.h>

#include <cmath>
#include <vector>

#include "fairaudit/error.hpp"
#include "fairaudit/rng.hpp"
#include "fairaudit/stats.hpp"
#include "oracles.hpp"

using namespace fairaudit;

namespace {

ContingencyStratum stratum_from_counts(long n11, long n10, long n01, long n00) {
  ContingencyStratum s;
  s.label = "all";
  s.n[1][1] = n11;
  s.n[1][0] = n10;
  s.n[0][1] = n01;
  s.n[0][0] = n00;
  return s;
}

// Binary vectors realizing given 2x2 joint counts, first index a, second b.
void append_cells(std::vector<int>& a, std::vector<int>& b, int av, int bv,
                  long count) {
  for (long i = 0; i < count; ++i) {
    a.push_back(av);
    b.push_back(bv);
  }
}

}  // namespace

TEST_CASE("worked two-class fixture: class-1 stratum") {
  // 827 borrowers, 611 predicted favorable, 270 in the protected group.
  const ContingencyStratum s = stratum_from_counts(178, 433, 92, 124);
  CHECK(s.total() == 827);
  CHECK(s.a_margin(1) == 611);
  CHECK(s.a_margin(0) == 216);
  CHECK(s.b_margin(0) == 557);
  CHECK(s.b_margin(1) == 270);

  const ChiSquareResult r = pearson_chi2_stratum(s);
  CHECK(std::abs(r.statistic - 13.15) < 0.01);
  CHECK(r.dof == 1);
  CHECK(r.p_value < 0.05);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("build_table recovers joint counts and margins") {
  std::vector<int> a, b;
  append_cells(a, b, 1, 0, 433);
  append_cells(a, b, 0, 0, 124);
  append_cells(a, b, 1, 1, 178);
  append_cells(a, b, 0, 1, 92);
  const std::vector<int> strata(a.size(), 0);

  const ContingencyTable t = build_table(a, b, strata);
  REQUIRE(t.strata.size() == 1);
  CHECK(t.strata[0].n[1][0] == 433);
  CHECK(t.strata[0].n[0][0] == 124);
  CHECK(t.strata[0].n[1][1] == 178);
  CHECK(t.strata[0].n[0][1] == 92);
  CHECK(t.total() == 827);

  SUBCASE("two strata split the sample") {
    std::vector<int> two(a.size(), 0);
    for (std::size_t i = 0; i < two.size(); i += 3) two[i] = 1;
    const ContingencyTable t2 = build_table(a, b, two);
    REQUIRE(t2.strata.size() == 2);
    CHECK(t2.strata[0].total() + t2.strata[1].total() ==
          static_cast<long>(a.size()));
  }

  SUBCASE("length mismatch throws") {
    const std::vector<int> short_strata(a.size() - 1, 0);
    CHECK_THROWS_AS(build_table(a, b, short_strata), DataError);
  }

  SUBCASE("identical sequences have empty off-diagonal cells") {
    const ContingencyTable t3 = build_table(a, a, strata);
    CHECK(t3.strata[0].n[1][0] == 0);
    CHECK(t3.strata[0].n[0][1] == 0);
  }
}

TEST_CASE("independence and degeneracy conventions") {
  SUBCASE("exactly independent balanced counts give statistic 0") {
    const ChiSquareResult r =
        pearson_chi2_stratum(stratum_from_counts(100, 100, 100, 100));
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK_FALSE(r.degenerate);
  }
  SUBCASE("constant first variable is degenerate") {
    const ChiSquareResult r =
        pearson_chi2_stratum(stratum_from_counts(40, 60, 0, 0));
    CHECK(r.degenerate);
    CHECK(r.statistic == 0.0);
    CHECK(r.dof == 0);
    CHECK(r.p_value == 1.0);
  }
  SUBCASE("empty stratum throws") {
    CHECK_THROWS_AS(pearson_chi2_stratum(stratum_from_counts(0, 0, 0, 0)),
                    DataError);
  }
}

TEST_CASE("Pearson statistic equals the closed 2x2 form on random tables") {
  Rng rng(20240901);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const ContingencyStratum s = stratum_from_counts(
        static_cast<long>(rng.uniform_int(200)), static_cast<long>(rng.uniform_int(200)),
        static_cast<long>(rng.uniform_int(200)), static_cast<long>(rng.uniform_int(200)));
    if (s.total() == 0 || s.degenerate()) continue;
    const double expected = oracles::pearson_2x2_closed_form(s);
    const double got = pearson_chi2_stratum(s).statistic;
    CHECK(std::abs(got - expected) < 1e-9);
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("chi2_sf reference points") {
  CHECK(std::abs(chi2_sf(3.84, 1) - 0.05) < 5e-4);
  CHECK(std::abs(chi2_sf(5.99, 2) - 0.05) < 5e-4);
  for (int k = 1; k <= 6; ++k) CHECK(chi2_sf(0.0, k) == 1.0);

  SUBCASE("monotone non-increasing in x") {
    for (int k : {1, 2, 5, 10}) {
      double prev = 1.0;
      for (double x = 0.0; x <= 60.0; x += 0.37) {
        const double v = chi2_sf(x, k);
        CHECK(v <= prev + 1e-15);
        prev = v;
      }
    }
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(chi2_sf(1.0, 0), DomainError);
    CHECK_THROWS_AS(chi2_sf(-0.5, 1), DomainError);
  }
}

TEST_CASE("chi2_sf agrees with the quadrature oracle") {
  for (int dof = 1; dof <= 10; ++dof) {
    for (double x = 0.0; x <= 50.0; x += 0.5) {
      const double expected = oracles::chi2_upper_tail_quadrature(x, dof);
      const double got = chi2_sf(x, dof);
      CHECK(std::abs(got - expected) < 1e-7);
    }
  }
}

TEST_CASE("chi2_quantile reference points and round trip") {
  CHECK(std::abs(chi2_quantile(0.95, 1) - 3.84) < 0.01);
  CHECK(std::abs(chi2_quantile(0.95, 2) - 5.99) < 0.01);

  SUBCASE("inverse relation on random (p, dof)") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
      const double alpha = 0.001 + 0.498 * rng.uniform_real();
      const int dof = 1 + static_cast<int>(rng.uniform_int(12));
      const double q = chi2_quantile(1.0 - alpha, dof);
      CHECK(std::abs(chi2_sf(q, dof) - alpha) < 1e-8);
    }
  }
  SUBCASE("p out of range") {
    CHECK_THROWS_AS(chi2_quantile(0.0, 1), DomainError);
    CHECK_THROWS_AS(chi2_quantile(1.0, 1), DomainError);
  }
}

TEST_CASE("cramers_v basics and properties") {
  SUBCASE("complete association") {
    std::vector<int> x, y;
    for (int i = 0; i < 100; ++i) {
      x.push_back(i % 2);
      y.push_back(i % 2);
    }
    CHECK(cramers_v(x, y) == doctest::Approx(1.0));
  }
  SUBCASE("independence by construction") {
    std::vector<int> x, y;
    for (int i = 0; i < 4000; ++i) {
      x.push_back(i % 2);
      y.push_back((i / 2) % 2);
    }
    CHECK(cramers_v(x, y) < 1e-12);
  }
  SUBCASE("symmetric and relabeling-invariant") {
    Rng rng(99);
    std::vector<int> x, y;
    for (int i = 0; i < 500; ++i) {
      x.push_back(static_cast<int>(rng.uniform_int(4)));
      y.push_back(static_cast<int>(rng.uniform_int(3)));
    }
    const double v = cramers_v(x, y);
    CHECK(cramers_v(y, x) == doctest::Approx(v));
    std::vector<int> x_relabeled(x.size());
    const int perm[4] = {2, 3, 1, 0};
    for (std::size_t i = 0; i < x.size(); ++i) x_relabeled[i] = perm[x[i]];
    CHECK(cramers_v(x_relabeled, y) == doctest::Approx(v));
  }
  SUBCASE("single observed level throws") {
    const std::vector<int> x(50, 1), y = [] {
      std::vector<int> v(50, 0);
      for (std::size_t i = 0; i < v.size(); i += 2) v[i] = 1;
      return v;
    }();
    CHECK_THROWS_AS(cramers_v(x, y), DataError);
  }
}
