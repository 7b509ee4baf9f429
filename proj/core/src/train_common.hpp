#pragma once

// Shared pieces of the two training loops (adapter touch-up and encoder).

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "tug/error.hpp"
#include "tug/graph.hpp"
#include "tug/rng.hpp"

namespace tug::detail {

inline double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Uniform node that is neither `source` nor one of its neighbors in `full`.
inline NodeId sample_nonneighbor(const Graph& full, NodeId source, Rng& rng) {
  const NodeId n = full.node_count();
  if (full.degree(source) + 1 >= n) {
    throw ValidationError(
        "negative sampling impossible: node " + std::to_string(source) +
        " is adjacent to every other node");
  }
  for (;;) {
    const NodeId cand = static_cast<NodeId>(rng.below(n));
    if (cand != source && !full.has_edge(source, cand)) return cand;
  }
}

// Draws max(1, round(frac*n)) distinct indices from [0, n).
inline std::vector<std::size_t> pick_subset(std::size_t n, double frac,
                                            Rng& rng) {
  std::size_t m = static_cast<std::size_t>(
      std::llround(frac * static_cast<double>(n)));
  if (m < 1) m = 1;
  if (m >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  return idx;
}

}  // namespace tug::detail
