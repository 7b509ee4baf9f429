#include "tug/gnn.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "math_kernels.hpp"
#include "train_common.hpp"
#include "tug/error.hpp"
#include "tug/eval.hpp"
#include "tug/optim.hpp"
#include "tug/parallel.hpp"
#include "tug/version.hpp"

namespace tug {

namespace {

constexpr std::uint64_t kInitTag = 0x61aa;
constexpr std::uint64_t kEpochTag = 0x42bb;
constexpr std::uint64_t kValidTag = 0x95cc;
constexpr std::size_t kRowChunk = 512;

void parallel_linear_forward(const double* X, const double* W,
                             const double* b, double* Y, std::size_t m,
                             std::size_t in, std::size_t out, int threads) {
  for_chunks(m, threads, kRowChunk,
             [&](std::size_t, std::size_t begin, std::size_t end) {
               kernels::linear_forward(X + begin * in, W, b, Y + begin * out,
                                       end - begin, in, out);
             });
}

// dst[v] = mean of src rows over N(v); zero vector for isolated nodes.
void neighbor_mean(const Graph& graph, const DMatrix& src, DMatrix& dst,
                   int threads) {
  const std::size_t d = src.cols;
  for_chunks(graph.node_count(), threads, kRowChunk,
             [&](std::size_t, std::size_t begin, std::size_t end) {
               for (std::size_t v = begin; v < end; ++v) {
                 double* out = dst.row(v);
                 std::fill(out, out + d, 0.0);
                 const auto nbrs = graph.neighbors(static_cast<NodeId>(v));
                 if (nbrs.empty()) continue;
                 for (NodeId u : nbrs) {
                   const double* row = src.row(u);
                   for (std::size_t k = 0; k < d; ++k) out[k] += row[k];
                 }
                 const double inv = 1.0 / static_cast<double>(nbrs.size());
                 for (std::size_t k = 0; k < d; ++k) out[k] *= inv;
               }
             });
}

// dst[u] += sum over v in N(u) of grad[v] / deg(v): the adjoint of
// neighbor_mean.
void neighbor_mean_backward(const Graph& graph, const DMatrix& grad,
                            DMatrix& dst, int threads) {
  const std::size_t d = grad.cols;
  for_chunks(graph.node_count(), threads, kRowChunk,
             [&](std::size_t, std::size_t begin, std::size_t end) {
               for (std::size_t u = begin; u < end; ++u) {
                 double* out = dst.row(u);
                 for (NodeId v : graph.neighbors(static_cast<NodeId>(u))) {
                   const double inv =
                       1.0 / static_cast<double>(graph.degree(v));
                   const double* row = grad.row(v);
                   for (std::size_t k = 0; k < d; ++k) out[k] += inv * row[k];
                 }
               }
             });
}

DMatrix densify(const FeatureMatrix& features) {
  DMatrix m(features.rows(), features.dim());
  for (std::size_t i = 0; i < features.values().size(); ++i) {
    m.data[i] = features.values()[i];
  }
  return m;
}

struct ForwardCache {
  std::vector<DMatrix> H;  // H[0] = input; H[l] = layer l output (post act)
  std::vector<DMatrix> M;  // M[l] = neighbor mean of H[l-1]; M[0] unused
};

ForwardCache forward_cached(const GnnModel& model, const Graph& graph,
                            const FeatureMatrix& features, int threads) {
  const GnnSpec& s = model.spec();
  const std::size_t n = graph.node_count();
  ForwardCache cache;
  cache.H.resize(static_cast<std::size_t>(s.num_layers) + 1);
  cache.M.resize(static_cast<std::size_t>(s.num_layers) + 1);
  cache.H[0] = densify(features);

  for (int l = 0; l < s.num_layers; ++l) {
    const auto lv = model.layer(l);
    DMatrix& prev = cache.H[static_cast<std::size_t>(l)];
    DMatrix& mean = cache.M[static_cast<std::size_t>(l) + 1];
    mean = DMatrix(n, lv.in);
    neighbor_mean(graph, prev, mean, threads);

    DMatrix out(n, lv.out);
    parallel_linear_forward(prev.data.data(), lv.w_self, lv.bias,
                            out.data.data(), n, lv.in, lv.out, threads);
    // Accumulate the aggregated term on top of the self term.
    DMatrix agg(n, lv.out);
    parallel_linear_forward(mean.data.data(), lv.w_neigh, nullptr,
                            agg.data.data(), n, lv.in, lv.out, threads);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
      out.data[i] += agg.data[i];
    }
    if (l + 1 < s.num_layers) {
      kernels::relu_inplace(out.data.data(), out.data.size());
    }
    cache.H[static_cast<std::size_t>(l) + 1] = std::move(out);
  }
  return cache;
}

// Backpropagates dH (grad wrt final embeddings, consumed) into `grad`.
void backward(const GnnModel& model, const Graph& graph, ForwardCache& cache,
              DMatrix dH, std::span<double> grad, int threads) {
  const GnnSpec& s = model.spec();
  std::size_t offset = grad.size();
  for (int l = s.num_layers - 1; l >= 0; --l) {
    const auto lv = model.layer(l);
    offset -= lv.in * lv.out * 2 + lv.out;
    double* gws = grad.data() + offset;
    double* gwn = gws + lv.in * lv.out;
    double* gb = gwn + lv.in * lv.out;

    DMatrix& prev = cache.H[static_cast<std::size_t>(l)];
    DMatrix& mean = cache.M[static_cast<std::size_t>(l) + 1];
    const DMatrix& act = cache.H[static_cast<std::size_t>(l) + 1];

    if (l + 1 < s.num_layers) {
      kernels::relu_backward_inplace(act.data.data(), dH.data.data(),
                                     dH.data.size());
    }
    kernels::linear_backward_params(prev.data.data(), dH.data.data(), gws,
                                    gb, dH.rows, lv.in, lv.out);
    kernels::linear_backward_params(mean.data.data(), dH.data.data(), gwn,
                                    nullptr, dH.rows, lv.in, lv.out);
    if (l == 0) break;

    DMatrix d_prev(dH.rows, lv.in);
    kernels::linear_backward_input(lv.w_self, dH.data.data(),
                                   d_prev.data.data(), dH.rows, lv.in,
                                   lv.out);
    DMatrix d_mean(dH.rows, lv.in);
    kernels::linear_backward_input(lv.w_neigh, dH.data.data(),
                                   d_mean.data.data(), dH.rows, lv.in,
                                   lv.out);
    neighbor_mean_backward(graph, d_mean, d_prev, threads);
    dH = std::move(d_prev);
  }
}

double lp_loss_and_output_grad(const DMatrix& Z,
                               std::span<const TrainTriple> triples,
                               DMatrix* dZ) {
  const std::size_t d = Z.cols;
  const double inv_b = 1.0 / static_cast<double>(triples.size());
  double loss = 0.0;
  for (const TrainTriple& t : triples) {
    const double* zu = Z.row(t.u);
    const double* zv = Z.row(t.v);
    const double* zn = Z.row(t.vneg);
    const double pos = dot(zu, zv, d);
    const double neg = dot(zu, zn, d);
    loss += detail::softplus(-pos) + detail::softplus(neg);
    if (dZ) {
      const double dpos = (detail::sigmoid(pos) - 1.0) * inv_b;
      const double dneg = detail::sigmoid(neg) * inv_b;
      double* du = dZ->row(t.u);
      double* dv = dZ->row(t.v);
      double* dn = dZ->row(t.vneg);
      for (std::size_t k = 0; k < d; ++k) {
        du[k] += dpos * zv[k] + dneg * zn[k];
        dv[k] += dpos * zu[k];
        dn[k] += dneg * zu[k];
      }
    }
  }
  return loss * inv_b;
}

double nc_loss_and_output_grad(const DMatrix& Z, const Labels& labels,
                               MaskKind mask, DMatrix* dZ) {
  const std::size_t num_classes = Z.cols;
  std::size_t count = 0;
  for (std::size_t v = 0; v < labels.mask.size(); ++v) {
    if (labels.mask[v] == mask) ++count;
  }
  if (count == 0) throw ValidationError("empty node mask");

  const double inv_m = 1.0 / static_cast<double>(count);
  std::vector<double> probs(num_classes);
  double loss = 0.0;
  for (std::size_t v = 0; v < labels.mask.size(); ++v) {
    if (labels.mask[v] != mask) continue;
    const std::int32_t target = labels.class_of[v];
    if (target < 0 || static_cast<std::size_t>(target) >= num_classes) {
      throw ValidationError("unknown class id " + std::to_string(target) +
                            " for node " + std::to_string(v));
    }
    const double* z = Z.row(v);
    double zmax = z[0];
    for (std::size_t c = 1; c < num_classes; ++c) zmax = std::max(zmax, z[c]);
    double denom = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      probs[c] = std::exp(z[c] - zmax);
      denom += probs[c];
    }
    loss -= std::log(probs[static_cast<std::size_t>(target)] / denom);
    if (dZ) {
      double* dz = dZ->row(v);
      for (std::size_t c = 0; c < num_classes; ++c) {
        const double p = probs[c] / denom;
        dz[c] += (p - (static_cast<std::int32_t>(c) == target ? 1.0 : 0.0)) *
                 inv_m;
      }
    }
  }
  return loss * inv_m;
}

double nc_mask_accuracy(const DMatrix& Z, const Labels& labels,
                        MaskKind mask) {
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t v = 0; v < labels.mask.size(); ++v) {
    if (labels.mask[v] != mask) continue;
    ++total;
    const double* z = Z.row(v);
    std::size_t arg = 0;
    for (std::size_t c = 1; c < Z.cols; ++c) {
      if (z[c] > z[arg]) arg = c;
    }
    if (static_cast<std::int32_t>(arg) == labels.class_of[v]) ++correct;
  }
  if (total == 0) throw ValidationError("empty node mask");
  return static_cast<double>(correct) / static_cast<double>(total);
}

double gnn_validation_mrr(const GnnModel& model, const Graph& train_graph,
                          const FeatureMatrix& features,
                          const SplitSet& split,
                          std::span<const std::size_t> subset,
                          std::size_t num_negs, int threads) {
  const DMatrix Z = model.forward_all(train_graph, features, threads);
  std::vector<double> positives;
  positives.reserve(subset.size());
  std::vector<std::vector<double>> negatives;
  negatives.reserve(subset.size());
  for (std::size_t idx : subset) {
    const Edge& e = split.valid_edges[idx];
    const auto& cands = split.valid_negatives[idx];
    if (cands.empty()) {
      throw ValidationError("validation edge has no stored negatives");
    }
    const std::size_t take = std::min(num_negs, cands.size());
    positives.push_back(dot(Z.row(e.u), Z.row(e.v), Z.cols));
    std::vector<double> scores;
    scores.reserve(take);
    for (std::size_t k = 0; k < take; ++k) {
      scores.push_back(dot(Z.row(e.u), Z.row(cands[k]), Z.cols));
    }
    negatives.push_back(std::move(scores));
  }
  return mrr(positives, negatives);
}

}  // namespace

GnnSpec GnnSpec::resolved() const {
  GnnSpec s = *this;
  if (s.output_dim == 0) s.output_dim = s.input_dim;
  if (s.num_layers == 2 && s.hidden_dim == 0) s.hidden_dim = s.output_dim;
  if (s.num_layers == 1) s.hidden_dim = 0;
  return s;
}

std::size_t GnnSpec::param_count() const {
  const GnnSpec s = resolved();
  if (s.num_layers == 1) {
    return 2 * s.input_dim * s.output_dim + s.output_dim;
  }
  return 2 * s.input_dim * s.hidden_dim + s.hidden_dim +
         2 * s.hidden_dim * s.output_dim + s.output_dim;
}

GnnModel::GnnModel(GnnSpec spec, std::vector<double> params)
    : spec_(spec.resolved()), params_(std::move(params)) {
  if (spec_.num_layers < 1 || spec_.num_layers > 2) {
    throw ValidationError("num_layers must be 1 or 2");
  }
  if (spec_.input_dim == 0 || spec_.output_dim == 0) {
    throw ValidationError("encoder dims must be >= 1");
  }
  if (params_.size() != spec_.param_count()) {
    throw ValidationError("encoder parameter count mismatch");
  }
}

GnnModel GnnModel::random_init(const GnnSpec& spec, Rng& rng) {
  const GnnSpec s = spec.resolved();
  GnnModel model(s, std::vector<double>(s.param_count(), 0.0));
  std::size_t offset = 0;
  for (int l = 0; l < s.num_layers; ++l) {
    const std::size_t in = (l == 0) ? s.input_dim : s.hidden_dim;
    const std::size_t out =
        (l + 1 == s.num_layers) ? s.output_dim : s.hidden_dim;
    const double bound = std::sqrt(6.0 / static_cast<double>(in));
    for (std::size_t i = 0; i < 2 * in * out; ++i) {
      model.params_[offset + i] = rng.uniform(-bound, bound);
    }
    offset += 2 * in * out + out;  // biases stay zero
  }
  return model;
}

GnnModel::LayerView GnnModel::layer(int l) const {
  const GnnSpec& s = spec_;
  std::size_t offset = 0;
  for (int j = 0; j < l; ++j) {
    const std::size_t in = (j == 0) ? s.input_dim : s.hidden_dim;
    const std::size_t out =
        (j + 1 == s.num_layers) ? s.output_dim : s.hidden_dim;
    offset += 2 * in * out + out;
  }
  LayerView lv;
  lv.in = (l == 0) ? s.input_dim : s.hidden_dim;
  lv.out = (l + 1 == s.num_layers) ? s.output_dim : s.hidden_dim;
  lv.w_self = params_.data() + offset;
  lv.w_neigh = lv.w_self + lv.in * lv.out;
  lv.bias = lv.w_neigh + lv.in * lv.out;
  return lv;
}

DMatrix GnnModel::forward_all(const Graph& graph,
                              const FeatureMatrix& features,
                              int threads) const {
  if (features.rows() != graph.node_count()) {
    throw ValidationError("feature rows do not match node count");
  }
  if (features.dim() != spec_.input_dim) {
    throw ValidationError("encoder expects input dim " +
                          std::to_string(spec_.input_dim) + ", got " +
                          std::to_string(features.dim()));
  }
  ForwardCache cache = forward_cached(*this, graph, features, threads);
  return std::move(cache.H.back());
}

DMatrix gnn_forward(const GnnModel& model, const Graph& graph,
                    const FeatureMatrix& features,
                    std::span<const NodeId> nodes, int threads) {
  const DMatrix all = model.forward_all(graph, features, threads);
  DMatrix out(nodes.size(), all.cols);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= all.rows) {
      throw ValidationError("node id out of range: " +
                            std::to_string(nodes[i]));
    }
    std::memcpy(out.row(i), all.row(nodes[i]), all.cols * sizeof(double));
  }
  return out;
}

double gnn_lp_loss_grad(const GnnModel& model, const Graph& graph,
                        const FeatureMatrix& features,
                        std::span<const TrainTriple> triples,
                        std::span<double> grad, int threads) {
  if (triples.empty()) throw ValidationError("empty triple batch");
  ForwardCache cache = forward_cached(model, graph, features, threads);
  const DMatrix& Z = cache.H.back();
  for (const TrainTriple& t : triples) {
    if (t.u >= Z.rows || t.v >= Z.rows || t.vneg >= Z.rows) {
      throw ValidationError("triple node id out of range");
    }
  }
  if (grad.empty()) {
    return lp_loss_and_output_grad(Z, triples, nullptr);
  }
  DMatrix dZ(Z.rows, Z.cols);
  const double loss = lp_loss_and_output_grad(Z, triples, &dZ);
  backward(model, graph, cache, std::move(dZ), grad, threads);
  return loss;
}

double gnn_nc_loss_grad(const GnnModel& model, const Graph& graph,
                        const FeatureMatrix& features, const Labels& labels,
                        std::span<double> grad, int threads) {
  if (labels.class_of.size() != graph.node_count()) {
    throw ValidationError("labels do not cover the node range");
  }
  ForwardCache cache = forward_cached(model, graph, features, threads);
  const DMatrix& Z = cache.H.back();
  if (grad.empty()) {
    return nc_loss_and_output_grad(Z, labels, MaskKind::Train, nullptr);
  }
  DMatrix dZ(Z.rows, Z.cols);
  const double loss = nc_loss_and_output_grad(Z, labels, MaskKind::Train, &dZ);
  backward(model, graph, cache, std::move(dZ), grad, threads);
  return loss;
}

GnnTrainResult gnn_train_lp(const Graph& train_graph,
                            const FeatureMatrix& features,
                            const SplitSet& split, const GnnSpec& spec,
                            const TrainConfig& config) {
  config.validate();
  if (!holdout_excluded(train_graph, split)) {
    throw ValidationError(
        "training graph contains a validation or test edge of the split");
  }
  if (train_graph.edge_count() == 0) {
    throw ValidationError("training graph has no edges");
  }
  if (split.valid_edges.empty()) {
    throw ValidationError("split has no validation edges for early stopping");
  }
  GnnSpec s = spec;
  if (s.input_dim == 0) s.input_dim = features.dim();
  s.task = GnnTask::LinkPredict;
  s = s.resolved();
  if (s.input_dim != features.dim()) {
    throw ValidationError("encoder input dim does not match features");
  }

  const Graph full = rebuild_full_graph(train_graph, split);
  Rng init_rng(derive_seed(config.seed, kInitTag));
  Rng epoch_rng(derive_seed(config.seed, kEpochTag));
  Rng valid_rng(derive_seed(config.seed, kValidTag));

  GnnModel model = GnnModel::random_init(s, init_rng);
  AdamOptimizer adam(model.params().size(), config.learning_rate);
  std::vector<double> grad(model.params().size(), 0.0);

  const auto& edges = train_graph.edges();
  std::vector<TrainTriple> triples(edges.size());

  EarlyStopper stopper(config.patience);
  std::vector<double> best_params(model.params().begin(),
                                  model.params().end());
  std::vector<std::size_t> fixed_subset;
  TrainLog log;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    // One fresh negative per train edge, full-batch step.
    for (std::size_t i = 0; i < edges.size(); ++i) {
      triples[i] = {edges[i].u, edges[i].v,
                    detail::sample_nonneighbor(full, edges[i].u, epoch_rng)};
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    const double loss = gnn_lp_loss_grad(model, train_graph, features,
                                         triples, grad, config.threads);
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
    }
    clip_global_norm(grad, config.clip_norm);
    adam.step(model.params(), grad);

    std::span<const std::size_t> subset;
    std::vector<std::size_t> fresh;
    if (config.fixed_valid_subset) {
      if (fixed_subset.empty()) {
        fixed_subset = detail::pick_subset(split.valid_edges.size(),
                                           config.valid_subsample_frac,
                                           valid_rng);
      }
      subset = fixed_subset;
    } else {
      fresh = detail::pick_subset(split.valid_edges.size(),
                                  config.valid_subsample_frac, valid_rng);
      subset = fresh;
    }
    const double vmrr =
        gnn_validation_mrr(model, train_graph, features, split, subset,
                           config.valid_negatives, config.threads);

    const auto t1 = std::chrono::steady_clock::now();
    log.epochs.push_back({epoch, loss, vmrr,
                          std::chrono::duration<double>(t1 - t0).count()});
    const bool stop = stopper.observe(vmrr);
    if (stopper.improved()) {
      best_params.assign(model.params().begin(), model.params().end());
    }
    if (stop) break;
  }

  std::copy(best_params.begin(), best_params.end(), model.params().begin());
  log.best_epoch = stopper.best_index();

  GnnTrainResult result;
  result.model = std::move(model);
  result.log = std::move(log);
  return result;
}

GnnTrainResult gnn_train_nc(const Graph& graph, const FeatureMatrix& features,
                            const Labels& labels, const GnnSpec& spec,
                            const TrainConfig& config) {
  config.validate();
  if (labels.class_of.size() != graph.node_count()) {
    throw ValidationError("labels do not cover the node range");
  }
  if (labels.count(MaskKind::Train) == 0 ||
      labels.count(MaskKind::Valid) == 0) {
    throw ValidationError("node classification needs train and valid masks");
  }
  GnnSpec s = spec;
  if (s.input_dim == 0) s.input_dim = features.dim();
  if (s.output_dim == 0) {
    s.output_dim = static_cast<std::size_t>(labels.num_classes);
  }
  s.task = GnnTask::NodeClassify;
  s = s.resolved();
  if (s.input_dim != features.dim()) {
    throw ValidationError("encoder input dim does not match features");
  }
  if (s.output_dim != static_cast<std::size_t>(labels.num_classes)) {
    throw ValidationError("encoder output dim must equal the class count");
  }

  Rng init_rng(derive_seed(config.seed, kInitTag));
  GnnModel model = GnnModel::random_init(s, init_rng);
  AdamOptimizer adam(model.params().size(), config.learning_rate);
  std::vector<double> grad(model.params().size(), 0.0);

  EarlyStopper stopper(config.patience);
  std::vector<double> best_params(model.params().begin(),
                                  model.params().end());
  TrainLog log;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::fill(grad.begin(), grad.end(), 0.0);
    const double loss = gnn_nc_loss_grad(model, graph, features, labels,
                                         grad, config.threads);
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch));
    }
    clip_global_norm(grad, config.clip_norm);
    adam.step(model.params(), grad);

    const DMatrix Z = model.forward_all(graph, features, config.threads);
    const double vacc = nc_mask_accuracy(Z, labels, MaskKind::Valid);

    const auto t1 = std::chrono::steady_clock::now();
    log.epochs.push_back({epoch, loss, vacc,
                          std::chrono::duration<double>(t1 - t0).count()});
    const bool stop = stopper.observe(vacc);
    if (stopper.improved()) {
      best_params.assign(model.params().begin(), model.params().end());
    }
    if (stop) break;
  }

  std::copy(best_params.begin(), best_params.end(), model.params().begin());
  log.best_epoch = stopper.best_index();

  GnnTrainResult result;
  result.model = std::move(model);
  result.log = std::move(log);
  return result;
}

namespace {

constexpr char kMagic[4] = {'T', 'U', 'G', 'N'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint i/o assumes a little-endian host");

template <class T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError("truncated checkpoint: " + path.string());
  return value;
}

}  // namespace

void save_gnn(const GnnModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  const GnnSpec& s = model.spec();
  out.write(kMagic, 4);
  write_pod<std::uint32_t>(out, kTugnVersion);
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(s.num_layers));
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(s.task));
  write_pod<std::uint64_t>(out, s.input_dim);
  write_pod<std::uint64_t>(out, s.hidden_dim);
  write_pod<std::uint64_t>(out, s.output_dim);
  for (double p : model.params()) {
    write_pod<float>(out, static_cast<float>(p));
  }
  if (!out) throw IoError("write failure on " + path.string());
}

GnnModel load_gnn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("bad magic in " + path.string() + " (expected TUGN)");
  }
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kTugnVersion) {
    throw FormatError("unsupported TUGN version " + std::to_string(version));
  }
  GnnSpec spec;
  spec.num_layers = static_cast<int>(read_pod<std::uint8_t>(in, path));
  const auto task_byte = read_pod<std::uint8_t>(in, path);
  if (task_byte > 1) throw FormatError("unknown task in " + path.string());
  spec.task = static_cast<GnnTask>(task_byte);
  spec.input_dim = static_cast<std::size_t>(read_pod<std::uint64_t>(in, path));
  spec.hidden_dim =
      static_cast<std::size_t>(read_pod<std::uint64_t>(in, path));
  spec.output_dim =
      static_cast<std::size_t>(read_pod<std::uint64_t>(in, path));

  std::vector<double> params(spec.param_count());
  for (double& p : params) {
    p = static_cast<double>(read_pod<float>(in, path));
  }
  return GnnModel(spec, std::move(params));
}

}  // namespace tug
