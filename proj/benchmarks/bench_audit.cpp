#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "fairaudit/clustering.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/fairness.hpp"
#include "fairaudit/fpdp.hpp"
#include "fairaudit/models.hpp"
#include "fairaudit/rng.hpp"
#include "fairaudit/stats.hpp"

using namespace fairaudit;

namespace {

const std::string kGermanPath = std::string(FAIRAUDIT_DATA_DIR) + "/german.data";

struct Fixture {
  Dataset data = load_german_credit(kGermanPath);
  EncodedMatrix x = one_hot_encode(data, false);
  std::vector<int> y = data.target_values();
  std::vector<int> d = data.protected_values();
  std::vector<int> classes =
      kprototypes(data, 2, std::nullopt, Rng::substream(kDefaultSeed, "clustering"))
          .labels;
  TreeModel prime = train_tree(x, y, tree_prime_preset());
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

static void BM_PearsonStratum(benchmark::State& state) {
  ContingencyStratum s;
  s.n[1][0] = 433;
  s.n[0][0] = 124;
  s.n[1][1] = 178;
  s.n[0][1] = 92;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson_chi2_stratum(s));
  }
}
BENCHMARK(BM_PearsonStratum);

static void BM_Chi2Sf(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi2_sf(x, 2));
    x += 0.1;
    if (x > 50.0) x = 0.1;
  }
}
BENCHMARK(BM_Chi2Sf);

static void BM_Ingest(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(load_german_credit(kGermanPath));
  }
}
BENCHMARK(BM_Ingest);

static void BM_TrainReferenceTree(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_tree(f.x, f.y, tree_prime_preset()));
  }
}
BENCHMARK(BM_TrainReferenceTree);

static void BM_FullAudit(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        audit(f.prime, f.x, f.y, f.d, 0.5, 0.05, f.classes));
  }
}
BENCHMARK(BM_FullAudit);

static void BM_SweepCategorical(benchmark::State& state) {
  Fixture& f = fixture();
  const FpdpContext ctx{f.prime, f.x, f.y, f.d, f.classes, 0.5, 0.10};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpdp_categorical(ctx, "Telephone", Hypothesis::SP));
  }
}
BENCHMARK(BM_SweepCategorical);

static void BM_KPrototypes(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kprototypes(f.data, 2, std::nullopt, Rng::substream(kDefaultSeed, "clustering")));
  }
}
BENCHMARK(BM_KPrototypes);

BENCHMARK_MAIN();
