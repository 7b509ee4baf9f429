#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tug {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable undirected graph in compressed sparse row form. Neighbor lists
// are sorted ascending; the canonical edge list stores each undirected edge
// once with u < v. Safe to read from any number of threads.
class Graph {
 public:
  Graph() = default;

  // Builds from an arbitrary edge list: self-loops are dropped, duplicates
  // (in either orientation) merged, and symmetry restored. `dropped`, when
  // non-null, receives the number of discarded input entries.
  static Graph from_edges(NodeId node_count, std::vector<Edge> edges,
                          std::size_t* dropped = nullptr);

  NodeId node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const {
    return offsets_[v + 1] - offsets_[v];
  }
  bool has_edge(NodeId u, NodeId v) const;

  // Each undirected edge once, u < v, lexicographically sorted.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Full-scan symmetry check: v in N(u) <=> u in N(v), no self-loops,
  // neighbor lists sorted and duplicate-free.
  bool check_consistency() const;

 private:
  NodeId node_count_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<Edge> edges_;
};

}  // namespace tug
