// Acceptance suite: runs each criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code = number of failures.
// Usage: tug_acceptance [criterion-number]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tug/adapter.hpp"
#include "tug/eval.hpp"
#include "tug/gnn.hpp"
#include "tug/metrics.hpp"
#include "tug/rng.hpp"
#include "tug/split.hpp"
#include "tug/synth.hpp"
#include "tug/trainer.hpp"

using namespace tug;
using nlohmann::json;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------------
// 1. Extremal constructions: h_f = +/-1 exactly, cosine blind to -1.

Check criterion1() {
  Check c;
  SynthSpec a;
  a.kind = SynthKind::Fig2a;
  a.n = 100;
  a.d = 8;
  a.seed = 1;
  const auto da = generate(a);
  const auto ha = feature_homophily(da.graph, da.features);
  c.expect(ha.defined && std::fabs(ha.h_f - 1.0) <= 1e-9,
           "matching construction h_f=" + fmt(ha.h_f) + " != 1");

  SynthSpec b;
  b.kind = SynthKind::Fig2b;
  b.n = 100;
  b.d = 8;
  b.seed = 1;
  const auto db = generate(b);
  const auto hb = feature_homophily(db.graph, db.features);
  c.expect(hb.defined && std::fabs(hb.h_f + 1.0) <= 1e-9,
           "complementary construction h_f=" + fmt(hb.h_f) + " != -1");
  const auto cb = mean_edge_cosine(db.graph, db.features);
  c.expect(std::fabs(cb.mean_cosine) <= 1e-9,
           "complementary construction cosine=" + fmt(cb.mean_cosine) +
               " != 0");
  return c;
}

// ---------------------------------------------------------------------
// 2. Metric bounds and invariances over 1,000 random instances.

Check criterion2() {
  Check c;
  int defined_seen = 0;
  for (std::uint64_t seed = 0; seed < 1000 && c.ok; ++seed) {
    Rng rng(derive_seed(seed, 0xacce));
    const NodeId n = 8 + static_cast<NodeId>(rng.below(193));  // <= 200
    const std::size_t d = 1 + rng.below(12);
    std::vector<Edge> edges;
    const std::size_t target = n + rng.below(2 * n);
    while (edges.size() < target) {
      const auto u = static_cast<NodeId>(rng.below(n));
      const auto v = static_cast<NodeId>(rng.below(n));
      if (u != v) edges.push_back({u, v});
    }
    const Graph g = Graph::from_edges(n, std::move(edges));
    FeatureMatrix feats(n, d);
    for (float& x : feats.values()) x = static_cast<float>(rng.gaussian());

    const auto h = feature_homophily(g, feats);
    const auto s = feature_smoothness(g, feats);
    c.expect(s.lambda_f >= 0.0, "lambda_f < 0 at seed " + fmt(seed));
    if (!h.defined) continue;
    ++defined_seen;
    c.expect(h.h_f >= -1.0 - 1e-9 && h.h_f <= 1.0 + 1e-9,
             "h_f out of bounds: " + fmt(h.h_f) + " at seed " + fmt(seed));

    FeatureMatrix translated = feats;
    std::vector<float> shift(d);
    for (float& x : shift) x = static_cast<float>(rng.uniform(-1.0, 1.0));
    for (std::size_t v = 0; v < n; ++v) {
      auto row = translated.row(v);
      for (std::size_t k = 0; k < d; ++k) row[k] += shift[k];
    }
    const auto ht = feature_homophily(g, translated);
    c.expect(ht.defined && std::fabs(ht.h_f - h.h_f) < 1e-6,
             "translation moved h_f by " + fmt(std::fabs(ht.h_f - h.h_f)) +
                 " at seed " + fmt(seed));

    FeatureMatrix scaled = feats;  // exact float32 scaling by 2
    for (float& x : scaled.values()) x *= 2.0f;
    const auto hs = feature_homophily(g, scaled);
    c.expect(hs.defined && std::fabs(hs.h_f - h.h_f) < 1e-9,
             "scaling moved h_f by " + fmt(std::fabs(hs.h_f - h.h_f)) +
                 " at seed " + fmt(seed));
  }
  c.expect(defined_seen > 900, "too few defined instances");
  return c;
}

// ---------------------------------------------------------------------
// 3. Hand-derived path fixture against the independent oracle.

Check criterion3() {
  Check c;
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  FeatureMatrix feats(3, 2);
  feats.row(0)[0] = 1.0f;
  feats.row(1)[0] = 1.0f;
  feats.row(1)[1] = 1.0f;
  feats.row(2)[1] = 1.0f;

  const auto h = feature_homophily(g, feats);
  c.expect(h.defined && std::fabs(h.h_f - (-1.0 / 3.0)) <= 1e-9,
           "path h_f=" + fmt(h.h_f) + " != -1/3");
  const auto s = feature_smoothness(g, feats);
  c.expect(std::fabs(s.lambda_f - 1.0) <= 1e-9,
           "path lambda_f=" + fmt(s.lambda_f) + " != 1");

  const oracle::Feats rows = {{1, 0}, {1, 1}, {0, 1}};
  const auto ho = oracle::homophily({{0, 1}, {1, 2}}, rows);
  c.expect(ho.has_value() && std::fabs(h.h_f - *ho) <= 1e-9,
           "oracle disagrees on the path fixture");
  const double so = oracle::smoothness({{0, 1}, {1, 2}}, rows);
  c.expect(std::fabs(s.lambda_f - so) <= 1e-9,
           "oracle disagrees on lambda_f");
  return c;
}

// ---------------------------------------------------------------------
// 4. Gradient correctness against central finite differences.

Check criterion4() {
  Check c;
  int done = 0;
  std::uint64_t seed = 9000;
  while (done < 20) {
    ++seed;
    Rng rng(seed);
    AdapterSpec spec;
    spec.kind = (done % 2 == 0) ? AdapterKind::Mlp : AdapterKind::Linear;
    spec.input_dim = 2 + rng.below(6);
    spec.hidden_dim = 2 + rng.below(6);
    spec.output_dim = 2 + rng.below(6);
    Adapter adapter = Adapter::random_init(spec, rng);
    FeatureMatrix base(14, spec.input_dim);
    for (float& x : base.values()) x = static_cast<float>(rng.gaussian());

    std::vector<TrainTriple> batch(16);
    for (auto& t : batch) {
      t.u = static_cast<NodeId>(rng.below(14));
      t.v = static_cast<NodeId>(rng.below(14));
      t.vneg = static_cast<NodeId>(rng.below(14));
    }
    // Keep finite differences away from the rectifier kink.
    if (spec.kind == AdapterKind::Mlp) {
      const auto& s = adapter.spec();
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
      if (margin < 1e-2) continue;
    }

    const auto analytic = structure_loss_grad(adapter, base, batch);
    const auto report = oracle::finite_difference_check(
        adapter.params(),
        [&] { return structure_loss_eval(adapter, base, batch); }, analytic);
    c.expect(report.max_rel_err < 1e-4,
             "adapter grad rel err " + fmt(report.max_rel_err) + " at seed " +
                 fmt(seed));
    ++done;
  }

  done = 0;
  seed = 9500;
  while (done < 10) {
    ++seed;
    Rng rng(seed);
    GnnSpec spec;
    spec.num_layers = (done % 2 == 0) ? 2 : 1;
    spec.input_dim = 2 + rng.below(4);
    spec.hidden_dim = 2 + rng.below(4);
    spec.output_dim = 2 + rng.below(4);
    GnnModel model = GnnModel::random_init(spec, rng);

    std::vector<Edge> edges;
    while (edges.size() < 24) {
      const auto u = static_cast<NodeId>(rng.below(10));
      const auto v = static_cast<NodeId>(rng.below(10));
      if (u != v) edges.push_back({u, v});
    }
    const Graph g = Graph::from_edges(10, std::move(edges));
    FeatureMatrix feats(10, spec.input_dim);
    for (float& x : feats.values()) x = static_cast<float>(rng.gaussian());

    if (spec.num_layers == 2) {
      // Hidden-layer margin check mirroring the adapter guard.
      const auto lv = model.layer(0);
      double margin = 1e300;
      for (NodeId v = 0; v < 10; ++v) {
        std::vector<double> mean(lv.in, 0.0);
        const auto nbrs = g.neighbors(v);
        for (NodeId u : nbrs) {
          const auto row = feats.row(u);
          for (std::size_t k = 0; k < lv.in; ++k) mean[k] += row[k];
        }
        if (!nbrs.empty()) {
          for (double& m : mean) m /= static_cast<double>(nbrs.size());
        }
        const auto x = feats.row(v);
        for (std::size_t j = 0; j < lv.out; ++j) {
          double z = lv.bias[j];
          for (std::size_t k = 0; k < lv.in; ++k) {
            z += lv.w_self[j * lv.in + k] * x[k] +
                 lv.w_neigh[j * lv.in + k] * mean[k];
          }
          margin = std::min(margin, std::fabs(z));
        }
      }
      if (margin < 1e-2) continue;
    }

    std::vector<TrainTriple> triples(10);
    for (auto& t : triples) {
      t.u = static_cast<NodeId>(rng.below(10));
      t.v = static_cast<NodeId>(rng.below(10));
      t.vneg = static_cast<NodeId>(rng.below(10));
    }
    std::vector<double> analytic(model.params().size(), 0.0);
    gnn_lp_loss_grad(model, g, feats, triples, analytic);
    const auto report = oracle::finite_difference_check(
        model.params(),
        [&] { return gnn_lp_loss_grad(model, g, feats, triples, {}); },
        analytic);
    c.expect(report.max_rel_err < 1e-4,
             "encoder grad rel err " + fmt(report.max_rel_err) + " at seed " +
                 fmt(seed));
    ++done;
  }
  return c;
}

// ---------------------------------------------------------------------
// 5. Ranking metrics against the brute-force sort oracle, exactly.

Check criterion5() {
  Check c;
  Rng rng(777);
  const int n = 200, k = 100;
  std::vector<double> positives(n);
  std::vector<std::vector<double>> negatives(n);
  for (int i = 0; i < n; ++i) {
    positives[i] = rng.gaussian();
    negatives[i].resize(k);
    for (double& s : negatives[i]) s = rng.gaussian();
  }
  double inv_sum = 0.0;
  std::size_t hits1 = 0, hits10 = 0;
  bool ranks_equal = true;
  for (int i = 0; i < n; ++i) {
    const std::size_t mine = pessimistic_rank(positives[i], negatives[i]);
    const std::size_t oracle_rank =
        oracle::rank_by_sort(positives[i], negatives[i]);
    ranks_equal = ranks_equal && (mine == oracle_rank);
    inv_sum += 1.0 / static_cast<double>(oracle_rank);
    hits1 += oracle_rank <= 1;
    hits10 += oracle_rank <= 10;
  }
  c.expect(ranks_equal, "a pessimistic rank disagrees with the sort oracle");
  c.expect(mrr(positives, negatives) == inv_sum / n, "MRR differs");
  c.expect(hits_at_k(positives, negatives, 1) ==
               static_cast<double>(hits1) / n,
           "Hits@1 differs");
  c.expect(hits_at_k(positives, negatives, 10) ==
               static_cast<double>(hits10) / n,
           "Hits@10 differs");
  return c;
}

// ---------------------------------------------------------------------
// 6. End-to-end touch-up on the corrupted planted benchmark, 3 seeds.

Check criterion6() {
  Check c;
  for (std::uint64_t seed = 1; seed <= 3 && c.ok; ++seed) {
    SynthSpec spec;
    spec.kind = SynthKind::Planted;
    spec.n = 5000;
    spec.d = 64;
    spec.communities = 4;
    spec.p_in = 0.1;
    spec.p_out = 0.002;
    spec.noise_sigma = 0.1;
    spec.corruption = Corruption::ShuffleRows;
    spec.seed = seed;
    const auto data = generate(spec);

    const auto h0 = feature_homophily(data.graph, data.features, 2);
    c.expect(h0.defined && h0.h_f < 0.1,
             "seed " + fmt(seed) + ": initial h_f=" + fmt(h0.h_f) +
                 " not < 0.1");

    const auto sr = split_edges(data.graph, {0.6, 0.1, 0.3}, 100, seed);

    TrainConfig cfg;  // defaults: mlp-friendly lr 1e-3, batch 64
    cfg.seed = seed;
    cfg.threads = 2;
    const auto touched = touchup(sr.train_graph, data.features, sr.split,
                                 {AdapterKind::Mlp, 0, 0, 0}, cfg);

    const auto h1 = feature_homophily(data.graph, touched.features, 2);
    c.expect(h1.defined && h1.h_f >= 2.0 * h0.h_f && h1.h_f >= 0.3,
             "seed " + fmt(seed) + ": final h_f=" + fmt(h1.h_f) +
                 " vs initial " + fmt(h0.h_f));

    const std::size_t ks[] = {1, 10};
    const auto before =
        evaluate_lp(DotScorer{&data.features}, sr.train_graph, sr.split,
                    EvalSplit::Test, ks, 2);
    const auto after =
        evaluate_lp(DotScorer{&touched.features}, sr.train_graph, sr.split,
                    EvalSplit::Test, ks, 2);
    c.expect(after.mrr >= 1.1 * before.mrr,
             "seed " + fmt(seed) + ": dot MRR " + fmt(before.mrr) + " -> " +
                 fmt(after.mrr) + " below +10%");

    TrainConfig gcfg;
    gcfg.learning_rate = 1e-2;
    gcfg.max_epochs = 60;
    gcfg.patience = 10;
    gcfg.seed = seed;
    gcfg.threads = 2;
    const GnnSpec gspec{2, 0, 0, 64, GnnTask::LinkPredict};
    const auto gnn_b =
        gnn_train_lp(sr.train_graph, data.features, sr.split, gspec, gcfg);
    const auto gnn_a =
        gnn_train_lp(sr.train_graph, touched.features, sr.split, gspec, gcfg);
    const auto eval_b =
        evaluate_lp(GnnScorer{&gnn_b.model, &data.features}, sr.train_graph,
                    sr.split, EvalSplit::Test, ks, 2);
    const auto eval_a =
        evaluate_lp(GnnScorer{&gnn_a.model, &touched.features},
                    sr.train_graph, sr.split, EvalSplit::Test, ks, 2);
    c.expect(eval_a.mrr >= eval_b.mrr,
             "seed " + fmt(seed) + ": encoder MRR " + fmt(eval_b.mrr) +
                 " -> " + fmt(eval_a.mrr) + " regressed");
    if (c.ok) {
      c.detail += (c.detail.empty() ? "" : "; ") + std::string("seed ") +
                  fmt(seed) + ": h_f " + fmt(h0.h_f) + "->" + fmt(h1.h_f) +
                  ", dot " + fmt(before.mrr) + "->" + fmt(after.mrr) +
                  ", gnn " + fmt(eval_b.mrr) + "->" + fmt(eval_a.mrr);
    }
  }
  return c;
}

// ---------------------------------------------------------------------
// 7. Node-classification sanity on the planted benchmark.

Check criterion7() {
  Check c;
  SynthSpec spec;
  spec.kind = SynthKind::Planted;
  spec.n = 5000;
  spec.d = 64;
  spec.communities = 4;
  spec.p_in = 0.1;
  spec.p_out = 0.002;
  spec.noise_sigma = 0.1;
  spec.corruption = Corruption::ShuffleRows;
  spec.seed = 1;
  const auto data = generate(spec);
  if (!data.labels.has_value()) {
    c.expect(false, "planted dataset lacks labels");
    return c;
  }

  const auto sr = split_edges(data.graph, {0.6, 0.1, 0.3}, 100, 1);
  TrainConfig cfg;
  cfg.seed = 1;
  cfg.threads = 2;
  const auto touched = touchup(sr.train_graph, data.features, sr.split,
                               {AdapterKind::Mlp, 0, 0, 0}, cfg);

  TrainConfig ncfg;
  ncfg.learning_rate = 1e-2;
  ncfg.max_epochs = 60;
  ncfg.patience = 10;
  ncfg.seed = 1;
  ncfg.threads = 2;
  const GnnSpec nspec{2, 0, 64, 4, GnnTask::NodeClassify};
  const auto model_b =
      gnn_train_nc(data.graph, data.features, *data.labels, nspec, ncfg);
  const auto model_a =
      gnn_train_nc(data.graph, touched.features, *data.labels, nspec, ncfg);
  const auto acc_b = evaluate_nc(model_b.model, data.graph, data.features,
                                 *data.labels, 2);
  const auto acc_a = evaluate_nc(model_a.model, data.graph, touched.features,
                                 *data.labels, 2);

  const double chance = 1.0 / 4.0;
  c.expect(acc_a.accuracy >= acc_b.accuracy,
           "touched-up accuracy " + fmt(acc_a.accuracy) +
               " below corrupted " + fmt(acc_b.accuracy));
  c.expect(acc_b.accuracy >= chance + 0.1,
           "corrupted accuracy " + fmt(acc_b.accuracy) + " not above chance");
  c.expect(acc_a.accuracy >= chance + 0.1,
           "touched-up accuracy " + fmt(acc_a.accuracy) +
               " not above chance");
  if (c.ok) {
    c.detail = "accuracy " + fmt(acc_b.accuracy) + " -> " +
               fmt(acc_a.accuracy);
  }
  return c;
}

// ---------------------------------------------------------------------
// 8. Pipeline determinism: byte-identical reports modulo timestamp.

Check criterion8() {
  Check c;
  testutil::TempDir dir;
  auto run = [&](const std::string& tag) -> json {
    const auto out_dir = dir.file("pipe-" + tag);
    const auto log = dir.file("log-" + tag + ".txt");
    const std::string cmd =
        std::string(TUG_CLI_PATH) +
        " pipeline --kind planted --n 600 --d 32 --communities 4"
        " --p-in 0.05 --p-out 0.005 --corruption shuffle-rows"
        " --ratios 0.6,0.2,0.2 --negatives 20 --max-epochs 5 --patience 3"
        " --seed 7 --deterministic --out-dir " +
        out_dir.string() + " > " + log.string() + " 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      c.expect(false, "pipeline run failed: " + testutil::read_text(log));
      return json::object();
    }
    return json::parse(testutil::read_text(out_dir / "report.json"));
  };

  json a = run("a");
  json b = run("b");
  if (!c.ok) return c;
  a["manifest"].erase("timestamp");
  b["manifest"].erase("timestamp");
  // Output paths differ between the two working directories by design.
  a.erase("outputs");
  b.erase("outputs");
  a["manifest"]["flags"].erase("out_dir");
  b["manifest"]["flags"].erase("out_dir");
  c.expect(a.dump() == b.dump(),
           "reports differ beyond the timestamp field");
  return c;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Check()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "extremal homophily constructions", criterion1},
      {2, "metric bounds and invariances (1000 instances)", criterion2},
      {3, "hand-derived path fixture vs oracle", criterion3},
      {4, "gradient checks vs finite differences", criterion4},
      {5, "ranking metrics vs brute-force oracle", criterion5},
      {6, "end-to-end touch-up on corrupted planted data", criterion6},
      {7, "node-classification sanity", criterion7},
      {8, "pipeline determinism", criterion8},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const auto& crit : criteria) {
    if (only != 0 && crit.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Check result;
    try {
      result = crit.fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n",
                result.ok ? "PASS" : "FAIL", crit.id, crit.name, secs,
                result.detail.empty() ? "" : " -- ",
                result.detail.c_str());
    std::fflush(stdout);
    failures += result.ok ? 0 : 1;
  }
  return failures;
}
