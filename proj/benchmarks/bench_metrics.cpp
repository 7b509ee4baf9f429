#include <benchmark/benchmark.h>

#include "tug/metrics.hpp"
#include "tug/synth.hpp"

namespace {

tug::SynthResult make_dataset(std::size_t n) {
  tug::SynthSpec spec;
  spec.kind = tug::SynthKind::Planted;
  spec.n = n;
  spec.d = 64;
  spec.communities = 4;
  spec.p_in = 0.02;
  spec.p_out = 0.002;
  spec.seed = 1;
  return tug::generate(spec);
}

void BM_FeatureHomophily(benchmark::State& state) {
  const auto data = make_dataset(static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tug::feature_homophily(data.graph, data.features, threads));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(data.graph.edge_count()));
}

void BM_FeatureSmoothness(benchmark::State& state) {
  const auto data = make_dataset(static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tug::feature_smoothness(data.graph, data.features, threads));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(data.graph.edge_count()));
}

void BM_MeanEdgeCosine(benchmark::State& state) {
  const auto data = make_dataset(static_cast<std::size_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tug::mean_edge_cosine(data.graph, data.features, threads));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(data.graph.edge_count()));
}

}  // namespace

BENCHMARK(BM_FeatureHomophily)
    ->Args({2000, 1})
    ->Args({2000, 2})
    ->Args({8000, 1})
    ->Args({8000, 2})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeatureSmoothness)
    ->Args({8000, 1})
    ->Args({8000, 2})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeanEdgeCosine)
    ->Args({8000, 1})
    ->Args({8000, 2})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
