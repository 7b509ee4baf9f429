#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tug/adapter.hpp"
#include "tug/error.hpp"
#include "tug/metrics.hpp"
#include "tug/optim.hpp"
#include "tug/rng.hpp"
#include "tug/split.hpp"
#include "tug/synth.hpp"
#include "tug/trainer.hpp"

using namespace tug;

namespace {

DMatrix row_matrix(std::vector<std::vector<double>> rows) {
  DMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[0].size(); ++k) m.row(i)[k] = rows[i][k];
  }
  return m;
}

FeatureMatrix random_features(std::size_t n, std::size_t d,
                              std::uint64_t seed) {
  FeatureMatrix m(n, d);
  Rng rng(seed);
  for (float& x : m.values()) x = static_cast<float>(rng.gaussian());
  return m;
}

// Smallest |pre-activation| of the mlp hidden layer over the batch; finite
// differences are only trustworthy away from the rectifier kink.
double relu_margin(const Adapter& adapter, const FeatureMatrix& base,
                   std::span<const TrainTriple> batch) {
  const auto& s = adapter.spec();
  if (s.kind != AdapterKind::Mlp) return 1.0;
  const double* w1 = adapter.params().data();
  const double* b1 = w1 + s.hidden_dim * s.input_dim;
  double margin = 1e300;
  auto visit = [&](NodeId node) {
    const auto x = base.row(node);
    for (std::size_t j = 0; j < s.hidden_dim; ++j) {
      double z = b1[j];
      for (std::size_t k = 0; k < s.input_dim; ++k) {
        z += w1[j * s.input_dim + k] * x[k];
      }
      margin = std::min(margin, std::fabs(z));
    }
  };
  for (const auto& t : batch) {
    visit(t.u);
    visit(t.v);
    visit(t.vneg);
  }
  return margin;
}

struct SmallSetup {
  Graph train_graph;
  SplitSet split;
  FeatureMatrix features;
};

SmallSetup planted_setup(std::uint64_t seed, std::size_t n = 300,
                         std::size_t d = 8) {
  SynthSpec spec;
  spec.kind = SynthKind::Planted;
  spec.n = n;
  spec.d = d;
  spec.communities = 3;
  spec.p_in = 0.08;
  spec.p_out = 0.01;
  spec.seed = seed;
  auto data = generate(spec);
  auto split = split_edges(data.graph, {0.6, 0.2, 0.2}, 5, seed);
  return {std::move(split.train_graph), std::move(split.split),
          std::move(data.features)};
}

}  // namespace

TEST_CASE("structure loss at zero logits is 2 ln 2") {
  const auto z = row_matrix({{0.0, 0.0}});
  CHECK(structure_loss(z, z, z) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("structure loss matches the scalar evaluation for (2, -1)") {
  // positive logit 2, negative logit -1
  const auto u = row_matrix({{2.0, 0.0}});
  const auto v = row_matrix({{1.0, 5.0}});
  const auto n = row_matrix({{-0.5, 7.0}});
  CHECK(structure_loss(u, v, n) ==
        doctest::Approx(0.4401896985611954).epsilon(1e-12));
}

TEST_CASE("structure loss decreases in the positive logit") {
  double prev = 1e300;
  for (double logit = -3.0; logit <= 3.0; logit += 0.5) {
    const auto u = row_matrix({{1.0}});
    const auto v = row_matrix({{logit}});
    const auto n = row_matrix({{-1.0}});
    const double loss = structure_loss(u, v, n);
    CHECK(loss < prev);
    prev = loss;
  }
}

TEST_CASE("structure loss stays finite for logits up to |80|") {
  const auto u = row_matrix({{80.0}});
  const auto hi = row_matrix({{1.0}});
  const auto lo = row_matrix({{-1.0}});
  CHECK(std::isfinite(structure_loss(u, hi, lo)));
  CHECK(std::isfinite(structure_loss(u, lo, hi)));
  CHECK(structure_loss(u, hi, lo) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("structure loss validates batch shapes") {
  const auto a = row_matrix({{1.0, 2.0}});
  const auto b = row_matrix({{1.0, 2.0}, {0.0, 1.0}});
  const auto c = row_matrix({{1.0}});
  CHECK_THROWS_AS(structure_loss(a, b, a), ValidationError);
  CHECK_THROWS_AS(structure_loss(a, c, a), ValidationError);
}

TEST_CASE("zero-weight linear adapter gives 2 ln 2 and a clean gradient") {
  AdapterSpec spec{AdapterKind::Linear, 4, 0, 3};
  Adapter adapter(spec.resolved(),
                  std::vector<double>(spec.param_count(), 0.0));
  const auto base = random_features(10, 4, 3);
  const std::vector<TrainTriple> batch = {{0, 1, 2}, {3, 4, 5}};

  CHECK(structure_loss_eval(adapter, base, batch) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

  const auto analytic = structure_loss_grad(adapter, base, batch);
  const auto report = oracle::finite_difference_check(
      adapter.params(), [&] { return structure_loss_eval(adapter, base, batch); },
      analytic);
  CHECK(report.max_rel_err < 1e-4);
}

TEST_CASE("analytic adapter gradients match finite differences") {
  int done = 0;
  std::uint64_t seed = 100;
  while (done < 20) {
    ++seed;
    Rng rng(seed);
    AdapterSpec spec;
    spec.kind = (done % 2 == 0) ? AdapterKind::Mlp : AdapterKind::Linear;
    spec.input_dim = 2 + rng.below(5);
    spec.output_dim = 2 + rng.below(5);
    spec.hidden_dim = 2 + rng.below(5);
    Adapter adapter = Adapter::random_init(spec, rng);
    const auto base = random_features(12, spec.input_dim, seed);

    std::vector<TrainTriple> batch(16);
    for (auto& t : batch) {
      t.u = static_cast<NodeId>(rng.below(12));
      t.v = static_cast<NodeId>(rng.below(12));
      t.vneg = static_cast<NodeId>(rng.below(12));
    }
    if (relu_margin(adapter, base, batch) < 1e-2) continue;

    const auto analytic = structure_loss_grad(adapter, base, batch);
    const auto report = oracle::finite_difference_check(
        adapter.params(),
        [&] { return structure_loss_eval(adapter, base, batch); }, analytic);
    CHECK(report.max_rel_err < 1e-4);
    ++done;
  }
}

TEST_CASE("a duplicated triple leaves the batch-mean gradient unchanged") {
  Rng rng(9);
  AdapterSpec spec{AdapterKind::Mlp, 4, 4, 4};
  Adapter adapter = Adapter::random_init(spec, rng);
  const auto base = random_features(6, 4, 77);
  const std::vector<TrainTriple> one = {{0, 1, 2}};
  const std::vector<TrainTriple> two = {{0, 1, 2}, {0, 1, 2}};
  const auto g1 = structure_loss_grad(adapter, base, one);
  const auto g2 = structure_loss_grad(adapter, base, two);
  REQUIRE(g1.size() == g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) {
    CHECK(g2[i] == doctest::Approx(g1[i]).epsilon(1e-12));
  }
}

TEST_CASE("adapter parameter counts and transform dims") {
  CHECK(AdapterSpec{AdapterKind::Linear, 8, 0, 3}.param_count() ==
        8 * 3 + 3);
  CHECK(AdapterSpec{AdapterKind::Mlp, 8, 5, 3}.param_count() ==
        8 * 5 + 5 + 5 * 3 + 3);
  // hidden defaults to output_dim, output to input
  const auto resolved = AdapterSpec{AdapterKind::Mlp, 8, 0, 0}.resolved();
  CHECK(resolved.hidden_dim == 8);
  CHECK(resolved.output_dim == 8);

  Rng rng(5);
  Adapter adapter =
      Adapter::random_init({AdapterKind::Mlp, 6, 0, 256}, rng);
  const auto out = adapter.transform(random_features(20, 6, 8));
  CHECK(out.rows() == 20);
  CHECK(out.dim() == 256);
  for (float x : out.values()) CHECK(std::isfinite(x));
}

TEST_CASE("early stopper returns the best epoch, not the last") {
  EarlyStopper stopper(3);
  const double scores[] = {0.1, 0.5, 0.3, 0.2, 0.4};
  bool stopped = false;
  std::size_t steps = 0;
  for (double s : scores) {
    ++steps;
    if (stopper.observe(s)) {
      stopped = true;
      break;
    }
  }
  CHECK(stopped);
  CHECK(steps == 5);               // 3 non-improving epochs after the peak
  CHECK(stopper.best_index() == 1);
  CHECK(stopper.best_score() == 0.5);
}

TEST_CASE("touchup with patience 0 and one epoch runs exactly once") {
  auto setup = planted_setup(3);
  TrainConfig cfg;
  cfg.max_epochs = 1;
  cfg.patience = 0;
  cfg.seed = 3;
  const auto result = touchup(setup.train_graph, setup.features, setup.split,
                              {AdapterKind::Mlp, 0, 0, 0}, cfg);
  CHECK(result.log.epochs.size() == 1);
  CHECK(result.log.best_epoch == 0);
  // Returned features are the adapter applied to the base matrix.
  const auto again = result.adapter.transform(setup.features);
  CHECK(again.values() == result.features.values());
}

TEST_CASE("touchup is bit-deterministic for a fixed seed") {
  auto setup = planted_setup(4);
  TrainConfig cfg;
  cfg.max_epochs = 4;
  cfg.patience = 10;
  cfg.seed = 99;
  const auto a = touchup(setup.train_graph, setup.features, setup.split,
                         {AdapterKind::Mlp, 0, 0, 0}, cfg);
  const auto b = touchup(setup.train_graph, setup.features, setup.split,
                         {AdapterKind::Mlp, 0, 0, 0}, cfg);
  REQUIRE(a.log.epochs.size() == b.log.epochs.size());
  for (std::size_t i = 0; i < a.log.epochs.size(); ++i) {
    CHECK(a.log.epochs[i].mean_loss == b.log.epochs[i].mean_loss);
    CHECK(a.log.epochs[i].valid_score == b.log.epochs[i].valid_score);
  }
  CHECK(a.features.values() == b.features.values());
}

TEST_CASE("training loss falls over the first five epochs on aligned data") {
  SynthSpec spec;
  spec.kind = SynthKind::Fig2a;
  spec.n = 1000;
  spec.d = 8;
  spec.seed = 12;
  auto data = generate(spec);
  auto sr = split_edges(data.graph, {0.6, 0.2, 0.2}, 5, 12);

  TrainConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.max_epochs = 5;
  cfg.patience = 100;
  cfg.seed = 12;
  const auto result = touchup(sr.train_graph, data.features, sr.split,
                              {AdapterKind::Mlp, 0, 0, 0}, cfg);
  REQUIRE(result.log.epochs.size() == 5);
  CHECK(result.log.epochs[4].mean_loss < result.log.epochs[0].mean_loss);
}

TEST_CASE("no held-out edge ever enters a batch or survives as a negative") {
  auto setup = planted_setup(5);
  std::set<Edge> held;
  for (const Edge& e : setup.split.valid_edges) held.insert(e);
  for (const Edge& e : setup.split.test_edges) held.insert(e);
  std::set<Edge> train(setup.train_graph.edges().begin(),
                       setup.train_graph.edges().end());

  std::size_t batches = 0;
  TrainHooks hooks;
  hooks.on_batch = [&](std::span<const TrainTriple> batch) {
    ++batches;
    for (const auto& t : batch) {
      const Edge pos{std::min(t.u, t.v), std::max(t.u, t.v)};
      CHECK(train.count(pos) == 1);
      CHECK(held.count(pos) == 0);
      const Edge neg{std::min(t.u, t.vneg), std::max(t.u, t.vneg)};
      CHECK(held.count(neg) == 0);
      CHECK(train.count(neg) == 0);
    }
  };

  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.patience = 10;
  cfg.seed = 5;
  touchup(setup.train_graph, setup.features, setup.split,
          {AdapterKind::Linear, 0, 0, 0}, cfg, &hooks);
  CHECK(batches > 0);
}

TEST_CASE("touchup rejects a training graph holding split edges") {
  auto setup = planted_setup(6);
  // Rebuild the full graph: it still contains valid/test edges.
  const Graph full = rebuild_full_graph(setup.train_graph, setup.split);
  TrainConfig cfg;
  cfg.max_epochs = 1;
  cfg.seed = 6;
  CHECK_THROWS_AS(touchup(full, setup.features, setup.split,
                          {AdapterKind::Linear, 0, 0, 0}, cfg),
                  ValidationError);
}

TEST_CASE("best epoch indexes the maximum recorded validation score") {
  auto setup = planted_setup(7);
  TrainConfig cfg;
  cfg.max_epochs = 6;
  cfg.patience = 6;
  cfg.seed = 7;
  cfg.fixed_valid_subset = true;
  const auto result = touchup(setup.train_graph, setup.features, setup.split,
                              {AdapterKind::Mlp, 0, 0, 0}, cfg);
  double best = -1.0;
  std::size_t arg = 0;
  for (const auto& e : result.log.epochs) {
    if (e.valid_score > best) {
      best = e.valid_score;
      arg = e.epoch;
    }
  }
  CHECK(result.log.best_epoch == arg);
}

TEST_CASE("train config validation") {
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.valid_subsample_frac = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("a non-finite loss is reported with its epoch and batch") {
  auto setup = planted_setup(8);
  // Poison a node that participates in a train edge.
  const NodeId victim = setup.train_graph.edges()[0].u;
  setup.features.row(victim)[0] = std::numeric_limits<float>::infinity();
  TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.seed = 8;
  try {
    touchup(setup.train_graph, setup.features, setup.split,
            {AdapterKind::Mlp, 0, 0, 0}, cfg);
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    CHECK(std::string(e.what()).find("batch") != std::string::npos);
  }
}

TEST_CASE("adam converges on a quadratic and clipping bounds the norm") {
  std::vector<double> x = {0.0};
  AdamOptimizer adam(1, 0.1);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> g = {2.0 * (x[0] - 3.0)};
    adam.step(x, g);
  }
  CHECK(x[0] == doctest::Approx(3.0).epsilon(1e-3));

  std::vector<double> grad = {3.0, 4.0};
  const double norm = clip_global_norm(grad, 1.0);
  CHECK(norm == doctest::Approx(5.0));
  CHECK(std::hypot(grad[0], grad[1]) == doctest::Approx(1.0));
}

TEST_CASE("adapter checkpoint round trip is byte-stable") {
  testutil::TempDir dir;
  Rng rng(42);
  Adapter adapter = Adapter::random_init({AdapterKind::Mlp, 6, 4, 5}, rng);
  const auto p1 = dir.file("a.tuga");
  const auto p2 = dir.file("b.tuga");
  save_adapter(adapter, p1);
  const Adapter loaded = load_adapter(p1);
  CHECK(loaded.spec().kind == AdapterKind::Mlp);
  CHECK(loaded.spec().input_dim == 6);
  CHECK(loaded.spec().hidden_dim == 4);
  CHECK(loaded.spec().output_dim == 5);
  save_adapter(loaded, p2);
  CHECK(testutil::fnv1a64_file(p1) == testutil::fnv1a64_file(p2));

  testutil::write_text(p1, "XXXX....");
  CHECK_THROWS_AS(load_adapter(p1), FormatError);
}
