#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tug/graph.hpp"

namespace tug {

struct SplitRatios {
  double train = 0.6;
  double valid = 0.1;
  double test = 0.3;
};

// Positive edges per split plus, for valid/test, one fixed-length list of
// negative target nodes per positive edge. Negatives are guaranteed to be
// non-edges of the full graph and distinct from their source node.
struct SplitSet {
  std::vector<Edge> train_edges;
  std::vector<Edge> valid_edges;
  std::vector<Edge> test_edges;
  std::vector<std::vector<NodeId>> valid_negatives;
  std::vector<std::vector<NodeId>> test_negatives;

  std::size_t total_edges() const {
    return train_edges.size() + valid_edges.size() + test_edges.size();
  }
};

struct SplitResult {
  Graph train_graph;  // validation/test edges removed, symmetry restored
  SplitSet split;
};

// Randomly partitions the edge set (per-split counts rounded to nearest,
// remainder absorbed by train) and samples negatives by rejection against
// the full edge set. Deterministic for a fixed seed.
SplitResult split_edges(const Graph& full_graph, const SplitRatios& ratios,
                        std::size_t negatives_per_edge, std::uint64_t seed);

// Rebuilds the edge set the split was made from (train + valid + test),
// for membership checks during negative sampling.
Graph rebuild_full_graph(const Graph& train_graph, const SplitSet& split);

// True when no valid/test edge of the split appears in the graph in either
// orientation.
bool holdout_excluded(const Graph& train_graph, const SplitSet& split);

void save_split(const SplitSet& split, const std::filesystem::path& path);
SplitSet load_split(const std::filesystem::path& path);

}  // namespace tug
