#include <benchmark/benchmark.h>

#include "tug/adapter.hpp"
#include "tug/gnn.hpp"
#include "tug/rng.hpp"
#include "tug/split.hpp"
#include "tug/synth.hpp"
#include "tug/trainer.hpp"

namespace {

struct Workload {
  tug::Graph train_graph;
  tug::SplitSet split;
  tug::FeatureMatrix features;
};

Workload make_workload(std::size_t n) {
  tug::SynthSpec spec;
  spec.kind = tug::SynthKind::Planted;
  spec.n = n;
  spec.d = 64;
  spec.communities = 4;
  spec.p_in = 0.02;
  spec.p_out = 0.002;
  spec.corruption = tug::Corruption::ShuffleRows;
  spec.seed = 3;
  auto data = tug::generate(spec);
  auto sr = tug::split_edges(data.graph, {0.6, 0.2, 0.2}, 10, 3);
  return {std::move(sr.train_graph), std::move(sr.split),
          std::move(data.features)};
}

// One adapter epoch (shuffled minibatches, Adam updates) per iteration.
void BM_TouchupEpoch(benchmark::State& state) {
  const auto w = make_workload(static_cast<std::size_t>(state.range(0)));
  tug::TrainConfig cfg;
  cfg.max_epochs = 1;
  cfg.patience = 1;
  cfg.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tug::touchup(w.train_graph, w.features, w.split,
                                          {tug::AdapterKind::Mlp, 0, 0, 0},
                                          cfg));
  }
  state.SetItemsProcessed(
      state.iterations() *
      static_cast<std::int64_t>(w.train_graph.edge_count()));
}

// One full-batch encoder epoch per iteration.
void BM_EncoderEpoch(benchmark::State& state) {
  const auto w = make_workload(static_cast<std::size_t>(state.range(0)));
  tug::TrainConfig cfg;
  cfg.max_epochs = 1;
  cfg.patience = 1;
  cfg.seed = 3;
  cfg.threads = static_cast<int>(state.range(1));
  const tug::GnnSpec spec{2, 0, 0, 64, tug::GnnTask::LinkPredict};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tug::gnn_train_lp(w.train_graph, w.features, w.split, spec, cfg));
  }
  state.SetItemsProcessed(
      state.iterations() *
      static_cast<std::int64_t>(w.train_graph.edge_count()));
}

void BM_AdapterTransform(benchmark::State& state) {
  const auto w = make_workload(4000);
  tug::Rng rng(5);
  const auto adapter = tug::Adapter::random_init(
      {tug::AdapterKind::Mlp, w.features.dim(), 0, w.features.dim()}, rng);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(adapter.transform(w.features, threads));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(w.features.rows()));
}

}  // namespace

BENCHMARK(BM_TouchupEpoch)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncoderEpoch)
    ->Args({4000, 1})
    ->Args({4000, 2})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdapterTransform)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
