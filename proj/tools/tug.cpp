// Command-line front end: synth -> split -> metrics -> touchup -> eval,
// plus a pipeline subcommand chaining the whole before/after experiment.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tug/adapter.hpp"
#include "tug/edge_list.hpp"
#include "tug/error.hpp"
#include "tug/eval.hpp"
#include "tug/features.hpp"
#include "tug/gnn.hpp"
#include "tug/graph.hpp"
#include "tug/labels.hpp"
#include "tug/metrics.hpp"
#include "tug/split.hpp"
#include "tug/synth.hpp"
#include "tug/trainer.hpp"
#include "tug/version.hpp"

namespace fs = std::filesystem;
using tug::cli::json;

namespace {

using Clock = std::chrono::steady_clock;

struct CommonOpts {
  int threads = 1;
  bool deterministic = false;
  std::string out;
  bool csv = false;

  int effective_threads() const { return deterministic ? 1 : threads; }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_csv = true) {
  cmd->add_option("--threads", opts.threads, "Worker threads for reductions");
  cmd->add_flag("--deterministic", opts.deterministic,
                "Pin single-threaded execution (all reductions are "
                "order-fixed at any thread count)");
  cmd->add_option("--out", opts.out, "Also write the JSON report here");
  if (with_csv) {
    cmd->add_flag("--csv", opts.csv, "Emit a flat CSV row instead of JSON");
  }
}

json manifest_json(const std::string& command, json flags, json inputs,
                   std::uint64_t seed, const Clock::time_point& started) {
  const double elapsed =
      std::chrono::duration<double>(Clock::now() - started).count();
  return {{"artifact_version", std::string(tug::kArtifactVersion)},
          {"command", command},
          {"flags", std::move(flags)},
          {"inputs", std::move(inputs)},
          {"seed", seed},
          {"formats", tug::cli::format_versions()},
          {"timestamp",
           {{"utc", tug::cli::utc_now_iso8601()},
            {"elapsed_seconds", elapsed}}}};
}

json metrics_block(const tug::Graph& graph, const tug::FeatureMatrix& feats,
                   int threads) {
  const auto h = tug::feature_homophily(graph, feats, threads);
  const auto s = tug::feature_smoothness(graph, feats, threads);
  const auto c = tug::mean_edge_cosine(graph, feats, threads);
  return {{"h_f", h.defined ? json(h.reported()) : json(nullptr)},
          {"defined", h.defined},
          {"lambda_f", s.lambda_f},
          {"mean_cosine", c.mean_cosine},
          {"zero_norm_edges", c.zero_norm_edges},
          {"nodes", graph.node_count()},
          {"edges", graph.edge_count()},
          {"dim", feats.dim()}};
}

json lp_report_json(const tug::LpReport& r) {
  json hits = json::object();
  for (const auto& [k, v] : r.hits) hits[std::to_string(k)] = v;
  return {{"mrr", r.mrr},
          {"hits", hits},
          {"positives", r.positives},
          {"negatives_per_positive", r.negatives_per_positive},
          {"h_f", r.h_f_defined ? json(r.h_f) : json(nullptr)},
          {"h_f_defined", r.h_f_defined}};
}

void write_train_log(const tug::TrainLog& log, const std::string& path) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw tug::IoError("cannot write train log: " + path);
  for (const auto& e : log.epochs) {
    out << json{{"epoch", e.epoch},
                {"mean_loss", e.mean_loss},
                {"valid_score", e.valid_score},
                {"seconds", e.seconds}}
               .dump()
        << '\n';
  }
}

json train_summary_json(const tug::TrainLog& log) {
  json losses = json::array();
  json valid = json::array();
  for (const auto& e : log.epochs) {
    losses.push_back(e.mean_loss);
    valid.push_back(e.valid_score);
  }
  return {{"epochs_run", log.epochs.size()},
          {"best_epoch", log.best_epoch},
          {"best_valid_score", log.epochs.empty()
                                   ? json(nullptr)
                                   : json(log.epochs[log.best_epoch]
                                              .valid_score)},
          {"mean_loss_per_epoch", losses},
          {"valid_score_per_epoch", valid}};
}

// ---------------------------------------------------------------- metrics

struct MetricsOpts {
  std::string graph_path;
  std::string features_path;
  bool strict = false;
  CommonOpts common;
};

void run_metrics(const MetricsOpts& o) {
  const auto started = Clock::now();
  const int threads = o.common.effective_threads();
  const auto loaded = tug::load_edge_list(o.graph_path);
  if (loaded.dropped_lines > 0) {
    std::cerr << "warning: dropped " << loaded.dropped_lines
              << " self-loop/duplicate lines from " << o.graph_path << "\n";
  }
  const auto features = tug::load_features(o.features_path, loaded.graph);

  json report = metrics_block(loaded.graph, features, threads);
  if (o.strict && !report["defined"].get<bool>()) {
    throw tug::cli::StrictUndefined(
        "feature homophily is undefined (constant features) and --strict "
        "is set");
  }
  report["dropped_lines"] = loaded.dropped_lines;
  report["manifest"] = manifest_json(
      "metrics",
      {{"graph", o.graph_path},
       {"features", o.features_path},
       {"strict", o.strict},
       {"threads", o.common.threads},
       {"deterministic", o.common.deterministic}},
      {{"graph", tug::cli::input_entry(o.graph_path)},
       {"features", tug::cli::input_entry(o.features_path)}},
      0, started);
  tug::cli::emit_report(report, o.common.out, o.common.csv,
                        {"nodes", "edges", "dim", "h_f", "defined",
                         "lambda_f", "mean_cosine", "zero_norm_edges"});
}

// ------------------------------------------------------------------ synth

struct SynthOpts {
  std::string kind = "planted";
  std::size_t n = 1000;
  std::size_t d = 16;
  std::size_t communities = 4;
  double p_in = 0.1;
  double p_out = 0.002;
  double noise_sigma = 0.1;
  std::string corruption = "none";
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string prefix = "data";
  CommonOpts common;
};

struct SynthFiles {
  fs::path edges;
  fs::path features;
  fs::path labels;  // empty when the kind has no labels
};

SynthFiles write_synth(const tug::SynthResult& data, const fs::path& dir,
                       const std::string& prefix) {
  fs::create_directories(dir);
  SynthFiles files;
  files.edges = dir / (prefix + ".edges.tsv");
  files.features = dir / (prefix + ".features.tugf");
  tug::save_edge_list(data.graph, files.edges);
  tug::save_features(data.features, files.features);
  if (data.labels) {
    files.labels = dir / (prefix + ".labels.tsv");
    tug::save_labels(*data.labels, files.labels);
  }
  return files;
}

void run_synth(const SynthOpts& o) {
  const auto started = Clock::now();
  tug::SynthSpec spec;
  spec.kind = tug::cli::parse_kind(o.kind);
  spec.n = o.n;
  spec.d = o.d;
  spec.communities = o.communities;
  spec.p_in = o.p_in;
  spec.p_out = o.p_out;
  spec.noise_sigma = o.noise_sigma;
  spec.corruption = tug::cli::parse_corruption(o.corruption);
  spec.seed = o.seed;

  const auto data = tug::generate(spec);
  const auto files = write_synth(data, o.out_dir, o.prefix);

  json report = {
      {"dataset", metrics_block(data.graph, data.features,
                                o.common.effective_threads())},
      {"outputs",
       {{"edges", files.edges.string()},
        {"features", files.features.string()},
        {"labels", files.labels.empty() ? json(nullptr)
                                        : json(files.labels.string())}}}};
  report["manifest"] = manifest_json(
      "synth",
      {{"kind", o.kind},
       {"n", o.n},
       {"d", o.d},
       {"communities", o.communities},
       {"p_in", o.p_in},
       {"p_out", o.p_out},
       {"noise_sigma", o.noise_sigma},
       {"corruption", o.corruption},
       {"out_dir", o.out_dir},
       {"prefix", o.prefix}},
      json::object(), o.seed, started);
  tug::cli::emit_report(report, o.common.out, false, {});
}

// ------------------------------------------------------------------ split

struct SplitOpts {
  std::string graph_path;
  std::string ratios = "0.6,0.1,0.3";
  std::size_t negatives = 100;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string prefix = "data";
  CommonOpts common;
};

void run_split(const SplitOpts& o) {
  const auto started = Clock::now();
  tug::SplitRatios ratios;
  tug::cli::parse_ratios(o.ratios, ratios.train, ratios.valid, ratios.test);
  const auto loaded = tug::load_edge_list(o.graph_path);
  const auto result =
      tug::split_edges(loaded.graph, ratios, o.negatives, o.seed);

  fs::create_directories(o.out_dir);
  const fs::path train_path =
      fs::path(o.out_dir) / (o.prefix + ".train.edges.tsv");
  const fs::path split_path = fs::path(o.out_dir) / (o.prefix + ".split.tsv");
  tug::save_edge_list(result.train_graph, train_path);
  tug::save_split(result.split, split_path);

  json report = {
      {"edges",
       {{"total", loaded.graph.edge_count()},
        {"train", result.split.train_edges.size()},
        {"valid", result.split.valid_edges.size()},
        {"test", result.split.test_edges.size()}}},
      {"negatives_per_edge", o.negatives},
      {"outputs",
       {{"train_graph", train_path.string()},
        {"split", split_path.string()}}}};
  report["manifest"] = manifest_json(
      "split",
      {{"graph", o.graph_path},
       {"ratios", o.ratios},
       {"negatives", o.negatives},
       {"out_dir", o.out_dir},
       {"prefix", o.prefix}},
      {{"graph", tug::cli::input_entry(o.graph_path)}}, o.seed, started);
  tug::cli::emit_report(report, o.common.out, false, {});
}

// ---------------------------------------------------------------- touchup

struct TouchupOpts {
  std::string graph_path;
  std::string features_path;
  std::string split_path;
  std::string adapter = "mlp";
  std::size_t hidden_dim = 0;
  std::size_t output_dim = 0;
  double lr = 1e-3;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 40;
  double clip_norm = 1.0;
  std::size_t patience = 5;
  double valid_subsample_frac = 0.01;
  std::size_t valid_negatives = 5;
  bool fixed_valid_subset = false;
  std::uint64_t seed = 0;
  std::string out_features;
  std::string out_checkpoint;
  std::string log_path;
  CommonOpts common;
};

tug::TrainConfig touchup_config(const TouchupOpts& o) {
  tug::TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.batch_size = o.batch_size;
  cfg.max_epochs = o.max_epochs;
  cfg.clip_norm = o.clip_norm;
  cfg.patience = o.patience;
  cfg.valid_subsample_frac = o.valid_subsample_frac;
  cfg.valid_negatives = o.valid_negatives;
  cfg.fixed_valid_subset = o.fixed_valid_subset;
  cfg.seed = o.seed;
  cfg.threads = o.common.effective_threads();
  return cfg;
}

json touchup_flags_json(const TouchupOpts& o) {
  return {{"graph", o.graph_path},
          {"features", o.features_path},
          {"split", o.split_path},
          {"adapter", o.adapter},
          {"hidden_dim", o.hidden_dim},
          {"output_dim", o.output_dim},
          {"lr", o.lr},
          {"batch_size", o.batch_size},
          {"max_epochs", o.max_epochs},
          {"clip_norm", o.clip_norm},
          {"patience", o.patience},
          {"valid_subsample_frac", o.valid_subsample_frac},
          {"valid_negatives", o.valid_negatives},
          {"fixed_valid_subset", o.fixed_valid_subset},
          {"out_features", o.out_features},
          {"out_checkpoint", o.out_checkpoint}};
}

void run_touchup(const TouchupOpts& o) {
  const auto started = Clock::now();
  const int threads = o.common.effective_threads();
  const auto loaded = tug::load_edge_list(o.graph_path);
  const auto base = tug::load_features(o.features_path, loaded.graph);
  const auto split = tug::load_split(o.split_path);

  // Fail fast, before any training, when the graph still contains
  // held-out edges.
  if (!tug::holdout_excluded(loaded.graph, split)) {
    throw tug::ValidationError(
        "training graph contains validation/test edges of the split; "
        "pass the train graph written by `tug split`");
  }

  tug::AdapterSpec spec;
  spec.kind = o.adapter == "linear" ? tug::AdapterKind::Linear
                                    : tug::AdapterKind::Mlp;
  if (o.adapter != "linear" && o.adapter != "mlp") {
    throw tug::ValidationError("unknown adapter kind: " + o.adapter);
  }
  spec.input_dim = base.dim();
  spec.hidden_dim = o.hidden_dim;
  spec.output_dim = o.output_dim;

  const json before = metrics_block(loaded.graph, base, threads);
  auto result = tug::touchup(loaded.graph, base, split, spec,
                             touchup_config(o));
  tug::save_features(result.features, o.out_features);
  tug::save_adapter(result.adapter, o.out_checkpoint);
  write_train_log(result.log, o.log_path);
  const json after = metrics_block(loaded.graph, result.features, threads);

  json report = {
      {"adapter",
       {{"kind", o.adapter},
        {"input_dim", result.adapter.spec().input_dim},
        {"hidden_dim", result.adapter.spec().hidden_dim},
        {"output_dim", result.adapter.spec().output_dim},
        {"params", result.adapter.params().size()}}},
      {"train", train_summary_json(result.log)},
      {"metrics_before", before},
      {"metrics_after", after},
      {"outputs",
       {{"features", o.out_features},
        {"checkpoint", o.out_checkpoint},
        {"log", o.log_path.empty() ? json(nullptr) : json(o.log_path)}}}};
  report["manifest"] = manifest_json(
      "touchup", touchup_flags_json(o),
      {{"graph", tug::cli::input_entry(o.graph_path)},
       {"features", tug::cli::input_entry(o.features_path)},
       {"split", tug::cli::input_entry(o.split_path)}},
      o.seed, started);
  tug::cli::emit_report(report, o.common.out, false, {});
}

// ------------------------------------------------------------------- eval

struct EvalOpts {
  std::string task = "lp";
  std::string scorer = "dot";
  std::string graph_path;
  std::string features_path;
  std::string split_path;
  std::string labels_path;
  std::string checkpoint;
  std::string eval_split = "test";
  std::string ks = "1,10";
  CommonOpts common;
};

void run_eval(const EvalOpts& o) {
  const auto started = Clock::now();
  const int threads = o.common.effective_threads();
  const auto loaded = tug::load_edge_list(o.graph_path);
  const auto features = tug::load_features(o.features_path, loaded.graph);

  json report;
  json inputs = {{"graph", tug::cli::input_entry(o.graph_path)},
                 {"features", tug::cli::input_entry(o.features_path)}};
  std::vector<std::string> csv_keys;

  if (o.task == "lp") {
    if (o.split_path.empty()) {
      throw tug::ValidationError("--split is required for link prediction");
    }
    const auto split = tug::load_split(o.split_path);
    inputs["split"] = tug::cli::input_entry(o.split_path);
    const auto ks = tug::cli::parse_ks(o.ks);
    const tug::EvalSplit which = o.eval_split == "valid"
                                     ? tug::EvalSplit::Valid
                                     : tug::EvalSplit::Test;
    if (o.eval_split != "valid" && o.eval_split != "test") {
      throw tug::ValidationError("--eval-split must be valid or test");
    }

    tug::GnnModel model;
    tug::LpScorer scorer = tug::DotScorer{&features};
    if (o.scorer == "gnn") {
      if (o.checkpoint.empty()) {
        throw tug::ValidationError("--checkpoint is required for the "
                                   "gnn scorer");
      }
      model = tug::load_gnn(o.checkpoint);
      inputs["checkpoint"] = tug::cli::input_entry(o.checkpoint);
      scorer = tug::GnnScorer{&model, &features};
    } else if (o.scorer != "dot") {
      throw tug::ValidationError("unknown scorer: " + o.scorer);
    }

    const auto lp = tug::evaluate_lp(scorer, loaded.graph, split, which,
                                     ks, threads);
    report = lp_report_json(lp);
    report["task"] = "lp";
    report["scorer"] = o.scorer;
    report["eval_split"] = o.eval_split;
    csv_keys = {"task", "scorer", "eval_split", "mrr"};
    for (std::size_t k : ks) csv_keys.push_back("hits." + std::to_string(k));
    csv_keys.push_back("h_f");
  } else if (o.task == "nc") {
    if (o.labels_path.empty() || o.checkpoint.empty()) {
      throw tug::ValidationError(
          "--labels and --checkpoint are required for node classification");
    }
    const auto labels =
        tug::load_labels(o.labels_path, loaded.graph.node_count());
    const auto model = tug::load_gnn(o.checkpoint);
    inputs["labels"] = tug::cli::input_entry(o.labels_path);
    inputs["checkpoint"] = tug::cli::input_entry(o.checkpoint);
    const auto nc =
        tug::evaluate_nc(model, loaded.graph, features, labels, threads);
    report = {{"task", "nc"},
              {"accuracy", nc.accuracy},
              {"correct", nc.correct},
              {"test_nodes", nc.test_nodes}};
    csv_keys = {"task", "accuracy", "correct", "test_nodes"};
  } else {
    throw tug::ValidationError("unknown task: " + o.task);
  }

  report["manifest"] = manifest_json(
      "eval",
      {{"task", o.task},
       {"scorer", o.scorer},
       {"graph", o.graph_path},
       {"features", o.features_path},
       {"split", o.split_path},
       {"labels", o.labels_path},
       {"checkpoint", o.checkpoint},
       {"eval_split", o.eval_split},
       {"ks", o.ks}},
      inputs, 0, started);
  tug::cli::emit_report(report, o.common.out, o.common.csv, csv_keys);
}

// --------------------------------------------------------------- pipeline

struct PipelineOpts {
  SynthOpts synth;
  std::string ratios = "0.6,0.1,0.3";
  std::size_t negatives = 100;
  TouchupOpts touchup;
  std::string ks = "1,10";
  bool with_gnn = false;
  bool with_nc = false;
  double gnn_lr = 1e-2;
  std::size_t gnn_max_epochs = 150;
  std::size_t gnn_patience = 20;
  std::size_t gnn_hidden = 0;
  int gnn_layers = 2;
  std::uint64_t seed = 0;
  std::string out_dir;
  CommonOpts common;
};

void run_pipeline(const PipelineOpts& o) {
  const auto started = Clock::now();
  const int threads = o.common.effective_threads();
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);

  // synth
  tug::SynthSpec spec;
  spec.kind = tug::cli::parse_kind(o.synth.kind);
  spec.n = o.synth.n;
  spec.d = o.synth.d;
  spec.communities = o.synth.communities;
  spec.p_in = o.synth.p_in;
  spec.p_out = o.synth.p_out;
  spec.noise_sigma = o.synth.noise_sigma;
  spec.corruption = tug::cli::parse_corruption(o.synth.corruption);
  spec.seed = o.seed;
  const auto data = tug::generate(spec);
  const auto files = write_synth(data, dir, "data");

  // split
  tug::SplitRatios ratios;
  tug::cli::parse_ratios(o.ratios, ratios.train, ratios.valid, ratios.test);
  const auto split_result =
      tug::split_edges(data.graph, ratios, o.negatives, o.seed);
  const auto& train_graph = split_result.train_graph;
  const auto& split = split_result.split;
  tug::save_edge_list(train_graph, dir / "data.train.edges.tsv");
  tug::save_split(split, dir / "data.split.tsv");

  // metrics on the full graph, before
  const json before = metrics_block(data.graph, data.features, threads);

  // touchup
  tug::AdapterSpec aspec;
  aspec.kind = o.touchup.adapter == "linear" ? tug::AdapterKind::Linear
                                             : tug::AdapterKind::Mlp;
  if (o.touchup.adapter != "linear" && o.touchup.adapter != "mlp") {
    throw tug::ValidationError("unknown adapter kind: " + o.touchup.adapter);
  }
  aspec.input_dim = data.features.dim();
  aspec.hidden_dim = o.touchup.hidden_dim;
  aspec.output_dim = o.touchup.output_dim;
  tug::TrainConfig tcfg = touchup_config(o.touchup);
  tcfg.seed = o.seed;
  tcfg.threads = threads;
  auto touched = tug::touchup(train_graph, data.features, split, aspec, tcfg);
  tug::save_features(touched.features, dir / "touched.features.tugf");
  tug::save_adapter(touched.adapter, dir / "adapter.tuga");
  write_train_log(touched.log, (dir / "train_log.jsonl").string());

  // metrics on the full graph, after
  const json after = metrics_block(data.graph, touched.features, threads);

  // eval: frozen dot scorer before vs after on the test split
  const auto ks = tug::cli::parse_ks(o.ks);
  const auto dot_before =
      tug::evaluate_lp(tug::DotScorer{&data.features}, train_graph, split,
                       tug::EvalSplit::Test, ks, threads);
  const auto dot_after =
      tug::evaluate_lp(tug::DotScorer{&touched.features}, train_graph, split,
                       tug::EvalSplit::Test, ks, threads);

  json eval_block = {{"dot_before", lp_report_json(dot_before)},
                     {"dot_after", lp_report_json(dot_after)}};

  tug::TrainConfig gcfg;
  gcfg.learning_rate = o.gnn_lr;
  gcfg.max_epochs = o.gnn_max_epochs;
  gcfg.patience = o.gnn_patience;
  gcfg.seed = o.seed;
  gcfg.threads = threads;

  if (o.with_gnn) {
    tug::GnnSpec gspec;
    gspec.num_layers = o.gnn_layers;
    gspec.hidden_dim = o.gnn_hidden;
    auto gnn_before =
        tug::gnn_train_lp(train_graph, data.features, split, gspec, gcfg);
    auto gnn_after =
        tug::gnn_train_lp(train_graph, touched.features, split, gspec, gcfg);
    tug::save_gnn(gnn_before.model, dir / "gnn_before.tugn");
    tug::save_gnn(gnn_after.model, dir / "gnn_after.tugn");
    const auto eb = tug::evaluate_lp(
        tug::GnnScorer{&gnn_before.model, &data.features}, train_graph,
        split, tug::EvalSplit::Test, ks, threads);
    const auto ea = tug::evaluate_lp(
        tug::GnnScorer{&gnn_after.model, &touched.features}, train_graph,
        split, tug::EvalSplit::Test, ks, threads);
    eval_block["gnn_before"] = lp_report_json(eb);
    eval_block["gnn_after"] = lp_report_json(ea);
  }

  if (o.with_nc) {
    if (!data.labels) {
      throw tug::ValidationError(
          "--nc needs a labeled dataset (planted kind)");
    }
    tug::GnnSpec nspec;
    nspec.num_layers = o.gnn_layers;
    nspec.hidden_dim = o.gnn_hidden == 0 ? 64 : o.gnn_hidden;
    nspec.task = tug::GnnTask::NodeClassify;
    auto nc_before =
        tug::gnn_train_nc(data.graph, data.features, *data.labels, nspec,
                          gcfg);
    auto nc_after = tug::gnn_train_nc(data.graph, touched.features,
                                      *data.labels, nspec, gcfg);
    const auto rb = tug::evaluate_nc(nc_before.model, data.graph,
                                     data.features, *data.labels, threads);
    const auto ra = tug::evaluate_nc(nc_after.model, data.graph,
                                     touched.features, *data.labels, threads);
    eval_block["nc_before"] = {{"accuracy", rb.accuracy},
                               {"test_nodes", rb.test_nodes}};
    eval_block["nc_after"] = {{"accuracy", ra.accuracy},
                              {"test_nodes", ra.test_nodes}};
  }

  json gains = json::object();
  if (before["defined"].get<bool>() && after["defined"].get<bool>()) {
    const double hb = before["h_f"].get<double>();
    const double ha = after["h_f"].get<double>();
    gains["h_f_before"] = hb;
    gains["h_f_after"] = ha;
    gains["h_f_ratio"] = hb > 0 ? json(ha / hb) : json(nullptr);
  }
  gains["dot_mrr_before"] = dot_before.mrr;
  gains["dot_mrr_after"] = dot_after.mrr;
  gains["dot_mrr_relative_gain"] =
      dot_before.mrr > 0 ? json((dot_after.mrr - dot_before.mrr) /
                                dot_before.mrr)
                         : json(nullptr);

  json report = {
      {"dataset",
       {{"kind", o.synth.kind},
        {"corruption", o.synth.corruption},
        {"nodes", data.graph.node_count()},
        {"edges", data.graph.edge_count()},
        {"dim", data.features.dim()},
        {"communities", o.synth.communities}}},
      {"split",
       {{"train", split.train_edges.size()},
        {"valid", split.valid_edges.size()},
        {"test", split.test_edges.size()},
        {"negatives_per_edge", o.negatives}}},
      {"metrics_before", before},
      {"metrics_after", after},
      {"touchup", train_summary_json(touched.log)},
      {"eval", eval_block},
      {"gains", gains},
      {"outputs", {{"dir", o.out_dir}}}};
  report["manifest"] = manifest_json(
      "pipeline",
      {{"kind", o.synth.kind},
       {"n", o.synth.n},
       {"d", o.synth.d},
       {"communities", o.synth.communities},
       {"p_in", o.synth.p_in},
       {"p_out", o.synth.p_out},
       {"noise_sigma", o.synth.noise_sigma},
       {"corruption", o.synth.corruption},
       {"ratios", o.ratios},
       {"negatives", o.negatives},
       {"adapter", o.touchup.adapter},
       {"lr", o.touchup.lr},
       {"batch_size", o.touchup.batch_size},
       {"max_epochs", o.touchup.max_epochs},
       {"clip_norm", o.touchup.clip_norm},
       {"patience", o.touchup.patience},
       {"gnn", o.with_gnn},
       {"nc", o.with_nc},
       {"gnn_lr", o.gnn_lr},
       {"gnn_max_epochs", o.gnn_max_epochs},
       {"ks", o.ks},
       {"out_dir", o.out_dir}},
      json::object(), o.seed, started);

  const std::string report_path = (dir / "report.json").string();
  tug::cli::emit_report(report, o.common.out.empty() ? report_path
                                                     : o.common.out,
                        false, {});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph feature alignment toolkit: score feature homophily, "
               "touch up misaligned features against the graph structure, "
               "and measure the downstream link-prediction and "
               "classification gains"};
  app.require_subcommand(1);
  std::string version = std::string(tug::kArtifactVersion) + " (formats: " +
                        tug::cli::format_versions().dump() + ")";
  app.set_version_flag("--version", version);

  MetricsOpts metrics_opts;
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "Feature homophily, smoothness, and mean edge cosine");
  metrics_cmd->add_option("--graph", metrics_opts.graph_path, "Edge list")
      ->required();
  metrics_cmd
      ->add_option("--features", metrics_opts.features_path, "TUGF file")
      ->required();
  metrics_cmd->add_flag("--strict", metrics_opts.strict,
                        "Exit 3 when homophily is undefined");
  add_common(metrics_cmd, metrics_opts.common);
  metrics_cmd->callback([&] { run_metrics(metrics_opts); });

  SynthOpts synth_opts;
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--kind", synth_opts.kind,
                        "fig2a | fig2b | planted | er-random");
  synth_cmd->add_option("--n", synth_opts.n, "Node count");
  synth_cmd->add_option("--d", synth_opts.d, "Feature dimension");
  synth_cmd->add_option("--communities", synth_opts.communities,
                        "Planted community count");
  synth_cmd->add_option("--p-in", synth_opts.p_in,
                        "Intra-community (or er) edge probability");
  synth_cmd->add_option("--p-out", synth_opts.p_out,
                        "Inter-community edge probability");
  synth_cmd->add_option("--noise-sigma", synth_opts.noise_sigma,
                        "Feature noise scale");
  synth_cmd->add_option(
      "--corruption", synth_opts.corruption,
      "none | shuffle-rows | gaussian-overwrite | shuffle-nodes");
  synth_cmd->add_option("--seed", synth_opts.seed, "Random seed");
  synth_cmd->add_option("--out-dir", synth_opts.out_dir, "Output directory")
      ->required();
  synth_cmd->add_option("--prefix", synth_opts.prefix, "Output file prefix");
  add_common(synth_cmd, synth_opts.common, false);
  synth_cmd->callback([&] { run_synth(synth_opts); });

  SplitOpts split_opts;
  auto* split_cmd = app.add_subcommand(
      "split", "Split edges into train/valid/test with sampled negatives");
  split_cmd->add_option("--graph", split_opts.graph_path, "Edge list")
      ->required();
  split_cmd->add_option("--ratios", split_opts.ratios,
                        "train,valid,test fractions");
  split_cmd->add_option("--negatives", split_opts.negatives,
                        "Negatives per held-out edge");
  split_cmd->add_option("--seed", split_opts.seed, "Random seed");
  split_cmd->add_option("--out-dir", split_opts.out_dir, "Output directory")
      ->required();
  split_cmd->add_option("--prefix", split_opts.prefix, "Output file prefix");
  add_common(split_cmd, split_opts.common, false);
  split_cmd->callback([&] { run_split(split_opts); });

  TouchupOpts touchup_opts;
  auto* touchup_cmd = app.add_subcommand(
      "touchup",
      "Train an adapter head with the structure-contrastive loss");
  touchup_cmd
      ->add_option("--graph", touchup_opts.graph_path, "Train graph edge list")
      ->required();
  touchup_cmd
      ->add_option("--features", touchup_opts.features_path, "Base TUGF")
      ->required();
  touchup_cmd->add_option("--split", touchup_opts.split_path, "Split file")
      ->required();
  touchup_cmd->add_option("--adapter", touchup_opts.adapter, "linear | mlp");
  touchup_cmd->add_option("--hidden-dim", touchup_opts.hidden_dim,
                          "MLP hidden width (0 = output dim)");
  touchup_cmd->add_option("--output-dim", touchup_opts.output_dim,
                          "Touched-up feature dim (0 = input dim)");
  touchup_cmd->add_option("--lr", touchup_opts.lr, "Learning rate");
  touchup_cmd->add_option("--batch-size", touchup_opts.batch_size,
                          "Minibatch size");
  touchup_cmd->add_option("--max-epochs", touchup_opts.max_epochs,
                          "Epoch cap");
  touchup_cmd->add_option("--clip-norm", touchup_opts.clip_norm,
                          "Global gradient norm clip");
  touchup_cmd->add_option("--patience", touchup_opts.patience,
                          "Early-stopping patience (epochs)");
  touchup_cmd->add_option("--valid-subsample-frac",
                          touchup_opts.valid_subsample_frac,
                          "Fraction of validation edges per check");
  touchup_cmd->add_option("--valid-negatives",
                          touchup_opts.valid_negatives,
                          "Negatives per validation edge");
  touchup_cmd->add_flag("--fixed-valid-subset",
                        touchup_opts.fixed_valid_subset,
                        "Reuse one validation subsample for every check");
  touchup_cmd->add_option("--seed", touchup_opts.seed, "Random seed");
  touchup_cmd
      ->add_option("--out-features", touchup_opts.out_features,
                   "Touched-up TUGF path")
      ->required();
  touchup_cmd
      ->add_option("--out-checkpoint", touchup_opts.out_checkpoint,
                   "Adapter checkpoint path")
      ->required();
  touchup_cmd->add_option("--log", touchup_opts.log_path,
                          "Per-epoch JSONL log path");
  add_common(touchup_cmd, touchup_opts.common, false);
  touchup_cmd->callback([&] { run_touchup(touchup_opts); });

  EvalOpts eval_opts;
  auto* eval_cmd = app.add_subcommand(
      "eval", "Rank held-out edges or score node classification");
  eval_cmd->add_option("--task", eval_opts.task, "lp | nc");
  eval_cmd->add_option("--scorer", eval_opts.scorer, "dot | gnn (lp only)");
  eval_cmd->add_option("--graph", eval_opts.graph_path, "Edge list")
      ->required();
  eval_cmd->add_option("--features", eval_opts.features_path, "TUGF file")
      ->required();
  eval_cmd->add_option("--split", eval_opts.split_path, "Split file (lp)");
  eval_cmd->add_option("--labels", eval_opts.labels_path, "Labels file (nc)");
  eval_cmd->add_option("--checkpoint", eval_opts.checkpoint,
                       "TUGN checkpoint (gnn scorer / nc)");
  eval_cmd->add_option("--eval-split", eval_opts.eval_split, "valid | test");
  eval_cmd->add_option("--ks", eval_opts.ks, "Comma-separated Hits@K list");
  add_common(eval_cmd, eval_opts.common);
  eval_cmd->callback([&] { run_eval(eval_opts); });

  PipelineOpts pipe_opts;
  auto* pipe_cmd = app.add_subcommand(
      "pipeline",
      "synth -> split -> metrics -> touchup -> metrics -> eval in one run");
  pipe_cmd->add_option("--kind", pipe_opts.synth.kind,
                       "fig2a | fig2b | planted | er-random");
  pipe_cmd->add_option("--n", pipe_opts.synth.n, "Node count");
  pipe_cmd->add_option("--d", pipe_opts.synth.d, "Feature dimension");
  pipe_cmd->add_option("--communities", pipe_opts.synth.communities,
                       "Planted community count");
  pipe_cmd->add_option("--p-in", pipe_opts.synth.p_in,
                       "Intra-community edge probability");
  pipe_cmd->add_option("--p-out", pipe_opts.synth.p_out,
                       "Inter-community edge probability");
  pipe_cmd->add_option("--noise-sigma", pipe_opts.synth.noise_sigma,
                       "Feature noise scale");
  pipe_cmd->add_option(
      "--corruption", pipe_opts.synth.corruption,
      "none | shuffle-rows | gaussian-overwrite | shuffle-nodes");
  pipe_cmd->add_option("--ratios", pipe_opts.ratios,
                       "train,valid,test fractions");
  pipe_cmd->add_option("--negatives", pipe_opts.negatives,
                       "Negatives per held-out edge");
  pipe_cmd->add_option("--adapter", pipe_opts.touchup.adapter,
                       "linear | mlp");
  pipe_cmd->add_option("--hidden-dim", pipe_opts.touchup.hidden_dim,
                       "MLP hidden width (0 = output dim)");
  pipe_cmd->add_option("--output-dim", pipe_opts.touchup.output_dim,
                       "Touched-up feature dim (0 = input dim)");
  pipe_cmd->add_option("--lr", pipe_opts.touchup.lr, "Adapter learning rate");
  pipe_cmd->add_option("--batch-size", pipe_opts.touchup.batch_size,
                       "Adapter minibatch size");
  pipe_cmd->add_option("--max-epochs", pipe_opts.touchup.max_epochs,
                       "Adapter epoch cap");
  pipe_cmd->add_option("--clip-norm", pipe_opts.touchup.clip_norm,
                       "Global gradient norm clip");
  pipe_cmd->add_option("--patience", pipe_opts.touchup.patience,
                       "Adapter early-stopping patience");
  pipe_cmd->add_option("--valid-subsample-frac",
                       pipe_opts.touchup.valid_subsample_frac,
                       "Fraction of validation edges per check");
  pipe_cmd->add_option("--valid-negatives",
                       pipe_opts.touchup.valid_negatives,
                       "Negatives per validation edge");
  pipe_cmd->add_flag("--fixed-valid-subset",
                     pipe_opts.touchup.fixed_valid_subset,
                     "Reuse one validation subsample for every check");
  pipe_cmd->add_option("--ks", pipe_opts.ks, "Comma-separated Hits@K list");
  pipe_cmd->add_flag("--gnn", pipe_opts.with_gnn,
                     "Also train/evaluate the encoder for link prediction");
  pipe_cmd->add_flag("--nc", pipe_opts.with_nc,
                     "Also train/evaluate node classification");
  pipe_cmd->add_option("--gnn-lr", pipe_opts.gnn_lr, "Encoder learning rate");
  pipe_cmd->add_option("--gnn-max-epochs", pipe_opts.gnn_max_epochs,
                       "Encoder epoch cap");
  pipe_cmd->add_option("--gnn-patience", pipe_opts.gnn_patience,
                       "Encoder early-stopping patience");
  pipe_cmd->add_option("--gnn-hidden", pipe_opts.gnn_hidden,
                       "Encoder hidden width (0 = output dim)");
  pipe_cmd->add_option("--gnn-layers", pipe_opts.gnn_layers,
                       "Encoder layers (1 or 2)");
  pipe_cmd->add_option("--seed", pipe_opts.seed, "Random seed");
  pipe_cmd->add_option("--out-dir", pipe_opts.out_dir, "Working directory")
      ->required();
  add_common(pipe_cmd, pipe_opts.common, false);
  pipe_cmd->callback([&] { run_pipeline(pipe_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const tug::cli::StrictUndefined& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tug::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
