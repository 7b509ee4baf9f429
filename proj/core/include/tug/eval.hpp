#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "tug/features.hpp"
#include "tug/gnn.hpp"
#include "tug/graph.hpp"
#include "tug/labels.hpp"
#include "tug/split.hpp"

namespace tug {

// Pessimistic rank of a positive among its negatives: 1 + count of
// negatives scoring >= the positive (ties count against the positive).
std::size_t pessimistic_rank(double positive,
                             std::span<const double> negatives);

// Mean reciprocal pessimistic rank. Lists are aligned per positive.
double mrr(std::span<const double> positives,
           const std::vector<std::vector<double>>& negatives);

// Fraction of positives with pessimistic rank <= k.
double hits_at_k(std::span<const double> positives,
                 const std::vector<std::vector<double>>& negatives,
                 std::size_t k);

enum class EvalSplit { Valid, Test };

// Scores an edge as the dot product of its endpoint feature rows.
struct DotScorer {
  const FeatureMatrix* features = nullptr;
};

// Scores an edge as the dot product of encoder output embeddings; message
// passing runs over the evaluation graph (normally the training graph).
struct GnnScorer {
  const GnnModel* model = nullptr;
  const FeatureMatrix* features = nullptr;
};

using LpScorer = std::variant<DotScorer, GnnScorer>;

struct LpReport {
  double mrr = 0.0;
  std::map<std::size_t, double> hits;  // K -> Hits@K
  std::size_t positives = 0;
  std::size_t negatives_per_positive = 0;
  double h_f = 0.0;          // homophily of the scored features on `graph`
  bool h_f_defined = false;
};

LpReport evaluate_lp(const LpScorer& scorer, const Graph& graph,
                     const SplitSet& split, EvalSplit which,
                     std::span<const std::size_t> ks, int threads = 1);

struct NcReport {
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t test_nodes = 0;
};

NcReport evaluate_nc(const GnnModel& model, const Graph& graph,
                     const FeatureMatrix& features, const Labels& labels,
                     int threads = 1);

}  // namespace tug
