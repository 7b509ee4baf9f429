#include "tug/eval.hpp"

#include <cmath>
#include <string>

#include "tug/error.hpp"
#include "tug/metrics.hpp"
#include "tug/parallel.hpp"

namespace tug {

namespace {

void check_aligned(std::size_t positives,
                   const std::vector<std::vector<double>>& negatives) {
  if (positives == 0) throw ValidationError("no positives to rank");
  if (negatives.size() != positives) {
    throw ValidationError("negative lists not aligned with positives");
  }
  for (const auto& list : negatives) {
    if (list.empty()) throw ValidationError("empty negative candidate list");
  }
}

void check_finite(double score) {
  if (std::isnan(score)) throw NumericError("NaN score in ranking");
}

}  // namespace

std::size_t pessimistic_rank(double positive,
                             std::span<const double> negatives) {
  check_finite(positive);
  std::size_t rank = 1;
  for (double s : negatives) {
    check_finite(s);
    if (s >= positive) ++rank;
  }
  return rank;
}

double mrr(std::span<const double> positives,
           const std::vector<std::vector<double>>& negatives) {
  check_aligned(positives.size(), negatives);
  double sum = 0.0;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    sum += 1.0 / static_cast<double>(
                     pessimistic_rank(positives[i], negatives[i]));
  }
  return sum / static_cast<double>(positives.size());
}

double hits_at_k(std::span<const double> positives,
                 const std::vector<std::vector<double>>& negatives,
                 std::size_t k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  check_aligned(positives.size(), negatives);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    if (pessimistic_rank(positives[i], negatives[i]) <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(positives.size());
}

LpReport evaluate_lp(const LpScorer& scorer, const Graph& graph,
                     const SplitSet& split, EvalSplit which,
                     std::span<const std::size_t> ks, int threads) {
  const auto& edges =
      which == EvalSplit::Test ? split.test_edges : split.valid_edges;
  const auto& neg_ids =
      which == EvalSplit::Test ? split.test_negatives : split.valid_negatives;
  if (edges.empty()) throw ValidationError("evaluation split is empty");
  if (neg_ids.size() != edges.size()) {
    throw ValidationError("split is missing negatives for this split");
  }

  const FeatureMatrix* features = nullptr;
  DMatrix embeddings;
  bool use_embeddings = false;
  if (const auto* dot_scorer = std::get_if<DotScorer>(&scorer)) {
    features = dot_scorer->features;
  } else {
    const auto& gnn_scorer = std::get<GnnScorer>(scorer);
    features = gnn_scorer.features;
    embeddings =
        gnn_scorer.model->forward_all(graph, *features, threads);
    use_embeddings = true;
  }
  if (features->rows() != graph.node_count()) {
    throw ValidationError("scorer features do not match node count");
  }

  auto score = [&](NodeId a, NodeId b) -> double {
    if (use_embeddings) {
      return dot(embeddings.row(a), embeddings.row(b), embeddings.cols);
    }
    const auto xa = features->row(a);
    const auto xb = features->row(b);
    double s = 0.0;
    for (std::size_t k = 0; k < xa.size(); ++k) {
      s += static_cast<double>(xa[k]) * static_cast<double>(xb[k]);
    }
    return s;
  };

  std::vector<double> positives(edges.size());
  std::vector<std::vector<double>> negatives(edges.size());
  for_chunks(edges.size(), threads, 256,
             [&](std::size_t, std::size_t begin, std::size_t end) {
               for (std::size_t i = begin; i < end; ++i) {
                 positives[i] = score(edges[i].u, edges[i].v);
                 auto& out = negatives[i];
                 out.resize(neg_ids[i].size());
                 for (std::size_t j = 0; j < neg_ids[i].size(); ++j) {
                   out[j] = score(edges[i].u, neg_ids[i][j]);
                 }
               }
             });

  LpReport report;
  report.mrr = mrr(positives, negatives);
  for (std::size_t k : ks) {
    report.hits[k] = hits_at_k(positives, negatives, k);
  }
  report.positives = edges.size();
  report.negatives_per_positive = neg_ids.empty() ? 0 : neg_ids[0].size();

  const HomophilyResult h = feature_homophily(graph, *features, threads);
  report.h_f = h.defined ? h.h_f : 0.0;
  report.h_f_defined = h.defined;
  return report;
}

NcReport evaluate_nc(const GnnModel& model, const Graph& graph,
                     const FeatureMatrix& features, const Labels& labels,
                     int threads) {
  if (labels.class_of.size() != graph.node_count()) {
    throw ValidationError("labels do not cover the node range");
  }
  if (labels.count(MaskKind::Test) == 0) {
    throw ValidationError("empty test mask");
  }
  const DMatrix Z = model.forward_all(graph, features, threads);

  NcReport report;
  for (std::size_t v = 0; v < labels.mask.size(); ++v) {
    if (labels.mask[v] != MaskKind::Test) continue;
    ++report.test_nodes;
    const double* z = Z.row(v);
    std::size_t arg = 0;
    for (std::size_t c = 1; c < Z.cols; ++c) {
      if (z[c] > z[arg]) arg = c;
    }
    if (static_cast<std::int32_t>(arg) == labels.class_of[v]) {
      ++report.correct;
    }
  }
  report.accuracy = static_cast<double>(report.correct) /
                    static_cast<double>(report.test_nodes);
  return report;
}

}  // namespace tug
