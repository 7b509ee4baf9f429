#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tug/adapter.hpp"
#include "tug/dense.hpp"
#include "tug/features.hpp"
#include "tug/graph.hpp"
#include "tug/split.hpp"

namespace tug {

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 40;
  double clip_norm = 1.0;          // global-norm gradient clip
  std::size_t patience = 5;        // epochs tolerated without improvement
  double valid_subsample_frac = 0.01;
  std::size_t valid_negatives = 5;
  std::uint64_t seed = 0;
  bool fixed_valid_subset = false; // reuse one subsample instead of fresh draws
  int threads = 1;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double valid_score = 0.0;  // MRR for edge objectives, accuracy for labels
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double final_h_f = 0.0;  // on the touched-up features over the train graph
  bool final_h_f_defined = false;
};

// Tracks the best validation score seen so far. observe() returns true when
// training should stop: `patience` consecutive non-improving epochs.
class EarlyStopper {
 public:
  explicit EarlyStopper(std::size_t patience) : patience_(patience) {}

  bool observe(double score) {
    const bool first = count_ == 0;
    ++count_;
    if (first || score > best_score_) {
      best_score_ = score;
      best_index_ = count_ - 1;
      since_best_ = 0;
      improved_ = true;
    } else {
      ++since_best_;
      improved_ = false;
    }
    return since_best_ >= patience_;
  }

  bool improved() const noexcept { return improved_; }
  std::size_t best_index() const noexcept { return best_index_; }
  double best_score() const noexcept { return best_score_; }

 private:
  std::size_t patience_;
  std::size_t count_ = 0;
  std::size_t since_best_ = 0;
  std::size_t best_index_ = 0;
  double best_score_ = 0.0;
  bool improved_ = false;
};

struct TrainTriple {
  NodeId u = 0;
  NodeId v = 0;
  NodeId vneg = 0;
};

// Observation points for instrumented runs (leakage assertions in tests).
struct TrainHooks {
  std::function<void(std::span<const TrainTriple>)> on_batch;
};

// Mean over the batch of -log sigma(x_u . x_v) - log(1 - sigma(x_u . x_v')),
// evaluated in the log-sum-exp form so logits up to |80| cannot overflow.
// Rows of the three matrices are aligned by batch index.
double structure_loss(const DMatrix& u_feats, const DMatrix& v_feats,
                      const DMatrix& vneg_feats);

// Loss of the batch with touched-up features f(x); loss only.
double structure_loss_eval(const Adapter& adapter, const FeatureMatrix& base,
                           std::span<const TrainTriple> batch);

// Analytic d(loss)/d(theta) through the adapter, flat in parameter order.
std::vector<double> structure_loss_grad(const Adapter& adapter,
                                        const FeatureMatrix& base,
                                        std::span<const TrainTriple> batch);

struct TouchupResult {
  Adapter adapter;        // parameters of the best validation epoch
  FeatureMatrix features; // f(x) for all nodes
  TrainLog log;
};

// Trains the adapter on shuffled train-edge minibatches, one rejection-
// sampled negative per positive, Adam under global-norm clipping, early
// stopping on subsampled-validation MRR. The training graph must not
// contain any validation or test edge of the split.
TouchupResult touchup(const Graph& train_graph, const FeatureMatrix& base,
                      const SplitSet& split, const AdapterSpec& adapter_spec,
                      const TrainConfig& config,
                      const TrainHooks* hooks = nullptr);

}  // namespace tug
