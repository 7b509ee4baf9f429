#include "tug/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "math_kernels.hpp"
#include "train_common.hpp"
#include "tug/error.hpp"
#include "tug/eval.hpp"
#include "tug/metrics.hpp"
#include "tug/optim.hpp"

namespace tug {

namespace {

constexpr std::uint64_t kInitTag = 0x7a11;
constexpr std::uint64_t kEpochTag = 0x3c52;
constexpr std::uint64_t kValidTag = 0xd2f9;

struct BatchWorkspace {
  DMatrix xu, xv, xn;     // gathered inputs, B x in
  DMatrix hu, hv, hn;     // hidden activations, B x hidden (mlp)
  DMatrix yu, yv, yn;     // outputs, B x out
  DMatrix dyu, dyv, dyn;  // output grads, B x out
  DMatrix dh;             // hidden grad scratch, B x hidden

  void resize(const AdapterSpec& s, std::size_t batch) {
    xu = DMatrix(batch, s.input_dim);
    xv = DMatrix(batch, s.input_dim);
    xn = DMatrix(batch, s.input_dim);
    yu = DMatrix(batch, s.output_dim);
    yv = DMatrix(batch, s.output_dim);
    yn = DMatrix(batch, s.output_dim);
    dyu = DMatrix(batch, s.output_dim);
    dyv = DMatrix(batch, s.output_dim);
    dyn = DMatrix(batch, s.output_dim);
    if (s.kind == AdapterKind::Mlp) {
      hu = DMatrix(batch, s.hidden_dim);
      hv = DMatrix(batch, s.hidden_dim);
      hn = DMatrix(batch, s.hidden_dim);
      dh = DMatrix(batch, s.hidden_dim);
    }
  }
};

void forward_role(const Adapter& a, const DMatrix& x, DMatrix& h, DMatrix& y,
                  std::size_t batch) {
  const auto& s = a.spec();
  const double* p = a.params().data();
  if (s.kind == AdapterKind::Linear) {
    kernels::linear_forward(x.data.data(), p, p + s.output_dim * s.input_dim,
                            y.data.data(), batch, s.input_dim, s.output_dim);
    return;
  }
  const double* w1 = p;
  const double* b1 = w1 + s.hidden_dim * s.input_dim;
  const double* w2 = b1 + s.hidden_dim;
  const double* b2 = w2 + s.output_dim * s.hidden_dim;
  kernels::linear_forward(x.data.data(), w1, b1, h.data.data(), batch,
                          s.input_dim, s.hidden_dim);
  kernels::relu_inplace(h.data.data(), batch * s.hidden_dim);
  kernels::linear_forward(h.data.data(), w2, b2, y.data.data(), batch,
                          s.hidden_dim, s.output_dim);
}

void backward_role(const Adapter& a, const DMatrix& x, const DMatrix& h,
                   const DMatrix& dy, DMatrix& dh, std::size_t batch,
                   std::span<double> grad) {
  const auto& s = a.spec();
  double* g = grad.data();
  if (s.kind == AdapterKind::Linear) {
    kernels::linear_backward_params(x.data.data(), dy.data.data(), g,
                                    g + s.output_dim * s.input_dim, batch,
                                    s.input_dim, s.output_dim);
    return;
  }
  const double* w2 = a.params().data() + s.hidden_dim * s.input_dim +
                     s.hidden_dim;
  double* gw1 = g;
  double* gb1 = gw1 + s.hidden_dim * s.input_dim;
  double* gw2 = gb1 + s.hidden_dim;
  double* gb2 = gw2 + s.output_dim * s.hidden_dim;
  kernels::linear_backward_params(h.data.data(), dy.data.data(), gw2, gb2,
                                  batch, s.hidden_dim, s.output_dim);
  kernels::linear_backward_input(w2, dy.data.data(), dh.data.data(), batch,
                                 s.hidden_dim, s.output_dim);
  kernels::relu_backward_inplace(h.data.data(), dh.data.data(),
                                 batch * s.hidden_dim);
  kernels::linear_backward_params(x.data.data(), dh.data.data(), gw1, gb1,
                                  batch, s.input_dim, s.hidden_dim);
}

// Loss over ws.xu/xv/xn (already gathered); fills grad when non-empty.
// Caller zeroes grad.
double batch_loss_grad(const Adapter& a, BatchWorkspace& ws,
                       std::size_t batch, std::span<double> grad) {
  const std::size_t out = a.spec().output_dim;
  forward_role(a, ws.xu, ws.hu, ws.yu, batch);
  forward_role(a, ws.xv, ws.hv, ws.yv, batch);
  forward_role(a, ws.xn, ws.hn, ws.yn, batch);

  const double inv_b = 1.0 / static_cast<double>(batch);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    const double* yu = ws.yu.row(i);
    const double* yv = ws.yv.row(i);
    const double* yn = ws.yn.row(i);
    const double pos = dot(yu, yv, out);
    const double neg = dot(yu, yn, out);
    loss += detail::softplus(-pos) + detail::softplus(neg);
    if (!grad.empty()) {
      const double dpos = (detail::sigmoid(pos) - 1.0) * inv_b;
      const double dneg = detail::sigmoid(neg) * inv_b;
      double* dyu = ws.dyu.row(i);
      double* dyv = ws.dyv.row(i);
      double* dyn = ws.dyn.row(i);
      for (std::size_t k = 0; k < out; ++k) {
        dyu[k] = dpos * yv[k] + dneg * yn[k];
        dyv[k] = dpos * yu[k];
        dyn[k] = dneg * yu[k];
      }
    }
  }
  loss *= inv_b;

  if (!grad.empty()) {
    backward_role(a, ws.xu, ws.hu, ws.dyu, ws.dh, batch, grad);
    backward_role(a, ws.xv, ws.hv, ws.dyv, ws.dh, batch, grad);
    backward_role(a, ws.xn, ws.hn, ws.dyn, ws.dh, batch, grad);
  }
  return loss;
}

void gather_row(const FeatureMatrix& src, NodeId node, double* dst) {
  const auto row = src.row(node);
  for (std::size_t k = 0; k < row.size(); ++k) dst[k] = row[k];
}

void gather_batch(const FeatureMatrix& base,
                  std::span<const TrainTriple> batch, BatchWorkspace& ws) {
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].u >= base.rows() || batch[i].v >= base.rows() ||
        batch[i].vneg >= base.rows()) {
      throw ValidationError("triple node id out of range");
    }
    gather_row(base, batch[i].u, ws.xu.row(i));
    gather_row(base, batch[i].v, ws.xv.row(i));
    gather_row(base, batch[i].vneg, ws.xn.row(i));
  }
}

// MRR over a subsample of validation edges, scoring with the current
// adapter against the first valid_negatives stored candidates.
double adapter_validation_mrr(const Adapter& a, const FeatureMatrix& base,
                              const SplitSet& split,
                              std::span<const std::size_t> subset,
                              std::size_t num_negs) {
  const auto& s = a.spec();
  std::vector<double> x(s.input_dim);
  std::vector<double> scratch(s.kind == AdapterKind::Mlp ? s.hidden_dim : 0);
  std::vector<double> eu(s.output_dim), ev(s.output_dim), en(s.output_dim);

  auto embed = [&](NodeId node, std::span<double> out) {
    gather_row(base, node, x.data());
    a.forward(x, out, scratch);
  };

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
    embed(e.u, eu);
    embed(e.v, ev);
    positives.push_back(dot(eu.data(), ev.data(), s.output_dim));
    std::vector<double> scores;
    scores.reserve(take);
    for (std::size_t k = 0; k < take; ++k) {
      embed(cands[k], en);
      scores.push_back(dot(eu.data(), en.data(), s.output_dim));
    }
    negatives.push_back(std::move(scores));
  }
  return mrr(positives, negatives);
}

}  // namespace

void TrainConfig::validate() const {
  if (learning_rate <= 0) throw ValidationError("learning_rate must be > 0");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (max_epochs < 1) throw ValidationError("max_epochs must be >= 1");
  if (clip_norm <= 0) throw ValidationError("clip_norm must be > 0");
  if (valid_subsample_frac <= 0 || valid_subsample_frac > 1) {
    throw ValidationError("valid_subsample_frac must be in (0, 1]");
  }
  if (valid_negatives < 1) {
    throw ValidationError("valid_negatives must be >= 1");
  }
}

double structure_loss(const DMatrix& u_feats, const DMatrix& v_feats,
                      const DMatrix& vneg_feats) {
  const std::size_t batch = u_feats.rows;
  const std::size_t dim = u_feats.cols;
  if (batch < 1) throw ValidationError("structure loss needs a batch >= 1");
  if (v_feats.rows != batch || vneg_feats.rows != batch) {
    throw ValidationError("structure loss batch length mismatch");
  }
  if (v_feats.cols != dim || vneg_feats.cols != dim) {
    throw ValidationError("structure loss dimension mismatch");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    const double pos = dot(u_feats.row(i), v_feats.row(i), dim);
    const double neg = dot(u_feats.row(i), vneg_feats.row(i), dim);
    loss += detail::softplus(-pos) + detail::softplus(neg);
  }
  return loss / static_cast<double>(batch);
}

double structure_loss_eval(const Adapter& adapter, const FeatureMatrix& base,
                           std::span<const TrainTriple> batch) {
  if (batch.empty()) throw ValidationError("empty batch");
  BatchWorkspace ws;
  ws.resize(adapter.spec(), batch.size());
  gather_batch(base, batch, ws);
  return batch_loss_grad(adapter, ws, batch.size(), {});
}

std::vector<double> structure_loss_grad(const Adapter& adapter,
                                        const FeatureMatrix& base,
                                        std::span<const TrainTriple> batch) {
  if (batch.empty()) throw ValidationError("empty batch");
  BatchWorkspace ws;
  ws.resize(adapter.spec(), batch.size());
  gather_batch(base, batch, ws);
  std::vector<double> grad(adapter.params().size(), 0.0);
  batch_loss_grad(adapter, ws, batch.size(), grad);
  return grad;
}

TouchupResult touchup(const Graph& train_graph, const FeatureMatrix& base,
                      const SplitSet& split, const AdapterSpec& adapter_spec,
                      const TrainConfig& config, const TrainHooks* hooks) {
  config.validate();
  if (base.rows() != train_graph.node_count()) {
    throw ValidationError("feature rows do not match node count");
  }
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

  AdapterSpec spec = adapter_spec;
  if (spec.input_dim == 0) spec.input_dim = base.dim();
  spec = spec.resolved();
  if (spec.input_dim != base.dim()) {
    throw ValidationError("adapter input dim does not match features");
  }

  // Negatives are rejected against the full edge set, not just the
  // training edges, so no held-out positive can be sampled as a negative.
  const Graph full = rebuild_full_graph(train_graph, split);

  Rng init_rng(derive_seed(config.seed, kInitTag));
  Rng epoch_rng(derive_seed(config.seed, kEpochTag));
  Rng valid_rng(derive_seed(config.seed, kValidTag));

  Adapter adapter = Adapter::random_init(spec, init_rng);
  AdamOptimizer adam(adapter.params().size(), config.learning_rate);

  const auto& train_edges = train_graph.edges();
  std::vector<std::size_t> order(train_edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  BatchWorkspace ws;
  ws.resize(spec, config.batch_size);
  std::vector<double> grad(adapter.params().size(), 0.0);
  std::vector<TrainTriple> triples(config.batch_size);

  EarlyStopper stopper(config.patience);
  std::vector<double> best_params(adapter.params().begin(),
                                  adapter.params().end());
  std::vector<std::size_t> fixed_subset;
  TrainLog log;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    epoch_rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t bsz =
          std::min(config.batch_size, order.size() - start);
      for (std::size_t i = 0; i < bsz; ++i) {
        const Edge& e = train_edges[order[start + i]];
        triples[i] = {e.u, e.v, detail::sample_nonneighbor(full, e.u,
                                                           epoch_rng)};
      }
      const std::span<const TrainTriple> batch(triples.data(), bsz);
      if (hooks && hooks->on_batch) hooks->on_batch(batch);

      gather_batch(base, batch, ws);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double loss = batch_loss_grad(adapter, ws, bsz, grad);
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite loss at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(start / config.batch_size));
      }
      clip_global_norm(grad, config.clip_norm);
      adam.step(adapter.params(), grad);
      loss_sum += loss * static_cast<double>(bsz);
      seen += bsz;
    }

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
    const double vmrr = adapter_validation_mrr(adapter, base, split, subset,
                                               config.valid_negatives);

    const auto t1 = std::chrono::steady_clock::now();
    log.epochs.push_back(
        {epoch, loss_sum / static_cast<double>(seen), vmrr,
         std::chrono::duration<double>(t1 - t0).count()});

    const bool stop = stopper.observe(vmrr);
    if (stopper.improved()) {
      best_params.assign(adapter.params().begin(), adapter.params().end());
    }
    if (stop) break;
  }

  std::copy(best_params.begin(), best_params.end(),
            adapter.params().begin());
  log.best_epoch = stopper.best_index();

  TouchupResult result;
  result.features = adapter.transform(base, config.threads);
  const HomophilyResult h =
      feature_homophily(train_graph, result.features, config.threads);
  log.final_h_f = h.defined ? h.h_f : 0.0;
  log.final_h_f_defined = h.defined;
  result.log = std::move(log);
  result.adapter = std::move(adapter);
  return result;
}

}  // namespace tug
