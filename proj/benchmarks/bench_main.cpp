#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "chids/anomaly.hpp"
#include "chids/feature_rank.hpp"
#include "chids/metrics.hpp"
#include "chids/part.hpp"
#include "chids/preprocess.hpp"
#include "synthetic_kdd.hpp"

namespace {

using namespace chids;

const std::string& corpus_text() {
  static const std::string text =
      testing::synthetic_kdd_text({.normal = 12000, .dos = 8000, .probe = 1200, .r2l = 500, .u2r = 50});
  return text;
}

const Dataset& corpus() {
  static const Dataset data = [] {
    std::istringstream in(corpus_text());
    return read_dataset(in, FeatureSchema::kdd(), ClassTaxonomy::kdd());
  }();
  return data;
}

// The four-feature normalized layout the misuse model trains on.
const Dataset& reduced() {
  static const Dataset data = [] {
    const auto unique = dedupe(corpus());
    const auto pruned = prune_features(unique, default_prune_set());
    const auto keep = select_top_k(rank_features(pruned, discretize(pruned), RankMethod::ChiSquared), 4);
    const auto projected = project_features(pruned, keep);
    return apply_normalizer(projected, fit_normalizer(projected));
  }();
  return data;
}

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) {
    std::istringstream in(corpus_text());
    benchmark::DoNotOptimize(read_dataset(in, FeatureSchema::kdd(), ClassTaxonomy::kdd()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_Parse)->Unit(benchmark::kMillisecond);

void BM_Dedupe(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dedupe(corpus()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_Dedupe)->Unit(benchmark::kMillisecond);

void BM_Discretize(benchmark::State& state) {
  const auto pruned = prune_features(dedupe(corpus()), default_prune_set());
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize(pruned, threads));
}
BENCHMARK(BM_Discretize)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TrainPart(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(train_part(reduced()));
}
BENCHMARK(BM_TrainPart)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const auto model = train_part(reduced());
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(model, reduced()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(reduced().size()));
}
BENCHMARK(BM_Predict)->Unit(benchmark::kMillisecond);

void BM_AnomalyEngine(benchmark::State& state) {
  const auto events = generate_stream(Scenario::Sybil, 1, {.duration = 3600.0, .nodes = 32});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_stream(events, RuleConfig{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events.size()));
}
BENCHMARK(BM_AnomalyEngine)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
