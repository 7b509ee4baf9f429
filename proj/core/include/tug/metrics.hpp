#pragma once

#include <vector>

#include "tug/features.hpp"
#include "tug/graph.hpp"

namespace tug {

// Edgewise feature correlation. h_f holds the raw ratio, which can exceed
// [-1, 1] by at most rounding error; reported() clamps it. `defined` is
// false when the centered variance over edge endpoints vanishes (constant
// features); h_f carries no meaning in that case and must not be read.
struct HomophilyResult {
  double h_f = 0.0;
  std::vector<double> edge_mean;  // mean feature vector over edge endpoints
  bool defined = false;

  double reported() const {
    return h_f < -1.0 ? -1.0 : (h_f > 1.0 ? 1.0 : h_f);
  }
};

struct SmoothnessResult {
  double lambda_f = 0.0;  // >= 0; smaller means smoother along edges
};

struct CosineResult {
  double mean_cosine = 0.0;
  std::size_t zero_norm_edges = 0;  // endpoints with zero norm score 0
};

// All three metrics are pure associative edge reductions; partial sums are
// combined in a fixed chunk order, so results are identical for any thread
// count.
HomophilyResult feature_homophily(const Graph& graph,
                                  const FeatureMatrix& features,
                                  int threads = 1);

SmoothnessResult feature_smoothness(const Graph& graph,
                                    const FeatureMatrix& features,
                                    int threads = 1);

CosineResult mean_edge_cosine(const Graph& graph,
                              const FeatureMatrix& features,
                              int threads = 1);

}  // namespace tug
