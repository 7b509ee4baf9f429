#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tug/dense.hpp"
#include "tug/features.hpp"
#include "tug/graph.hpp"
#include "tug/labels.hpp"
#include "tug/rng.hpp"
#include "tug/split.hpp"
#include "tug/trainer.hpp"

namespace tug {

enum class GnnTask : std::uint8_t { LinkPredict = 0, NodeClassify = 1 };

struct GnnSpec {
  int num_layers = 2;  // 1 or 2
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;  // defaults to output_dim when 0 (2 layers)
  std::size_t output_dim = 0;  // equals the class count for NodeClassify
  GnnTask task = GnnTask::LinkPredict;

  std::size_t param_count() const;
  GnnSpec resolved() const;
};

// Mean-aggregation message-passing encoder:
//   h_v <- act(W_self h_v + W_neigh mean_{u in N(v)} h_u + b)
// with a rectifier between layers and a linear last layer. Isolated nodes
// aggregate a zero vector. Parameter layout per layer, flat:
//   W_self (out x in), W_neigh (out x in), b (out)
class GnnModel {
 public:
  GnnModel() = default;
  GnnModel(GnnSpec spec, std::vector<double> params);

  static GnnModel random_init(const GnnSpec& spec, Rng& rng);

  const GnnSpec& spec() const noexcept { return spec_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }

  struct LayerView {
    const double* w_self;
    const double* w_neigh;
    const double* bias;
    std::size_t in;
    std::size_t out;
  };
  LayerView layer(int l) const;

  // Output embeddings for every node (message passing over the whole graph).
  DMatrix forward_all(const Graph& graph, const FeatureMatrix& features,
                      int threads = 1) const;

 private:
  GnnSpec spec_;
  std::vector<double> params_;
};

// Rows of the full forward pass for the requested nodes.
DMatrix gnn_forward(const GnnModel& model, const Graph& graph,
                    const FeatureMatrix& features,
                    std::span<const NodeId> nodes, int threads = 1);

// Edge-contrastive loss on output embeddings for a fixed triple batch;
// fills `grad` (flat, parameter order) when non-empty. Used by the trainer
// and by gradient checks.
double gnn_lp_loss_grad(const GnnModel& model, const Graph& graph,
                        const FeatureMatrix& features,
                        std::span<const TrainTriple> triples,
                        std::span<double> grad, int threads = 1);

// Softmax cross-entropy over train-mask nodes; same grad convention.
double gnn_nc_loss_grad(const GnnModel& model, const Graph& graph,
                        const FeatureMatrix& features, const Labels& labels,
                        std::span<double> grad, int threads = 1);

struct GnnTrainResult {
  GnnModel model;  // parameters of the best validation epoch
  TrainLog log;
};

// Full-batch training with the edge-contrastive objective: one fresh
// negative per train edge per epoch, one Adam step per epoch, early stopping
// on subsampled-validation MRR. The training graph must exclude the split's
// validation and test edges.
GnnTrainResult gnn_train_lp(const Graph& train_graph,
                            const FeatureMatrix& features,
                            const SplitSet& split, const GnnSpec& spec,
                            const TrainConfig& config);

// Full-batch node classification: cross-entropy on train-mask nodes, early
// stopping on valid-mask accuracy.
GnnTrainResult gnn_train_nc(const Graph& graph, const FeatureMatrix& features,
                            const Labels& labels, const GnnSpec& spec,
                            const TrainConfig& config);

// Checkpoint: magic "TUGN", u32 LE version, u8 num_layers, u8 task,
// u64 LE input/hidden/output dims, then float32 LE parameters.
void save_gnn(const GnnModel& model, const std::filesystem::path& path);
GnnModel load_gnn(const std::filesystem::path& path);

}  // namespace tug
