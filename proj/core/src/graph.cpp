#include "tug/graph.hpp"

#include <algorithm>

#include "tug/error.hpp"

namespace tug {

Graph Graph::from_edges(NodeId node_count, std::vector<Edge> edges,
                        std::size_t* dropped) {
  std::size_t discarded = 0;

  for (Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw ValidationError("edge endpoint out of range: (" +
                            std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") with node count " + std::to_string(node_count));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }

  std::erase_if(edges, [&](const Edge& e) {
    if (e.u == e.v) {
      ++discarded;
      return true;
    }
    return false;
  });

  std::sort(edges.begin(), edges.end());
  const auto first_dup = std::unique(edges.begin(), edges.end());
  discarded += static_cast<std::size_t>(edges.end() - first_dup);
  edges.erase(first_dup, edges.end());

  Graph g;
  g.node_count_ = node_count;
  g.edges_ = std::move(edges);

  std::vector<std::size_t> deg(node_count, 0);
  for (const Edge& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.offsets_.assign(node_count + 1, 0);
  for (NodeId v = 0; v < node_count; ++v) {
    g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  }
  g.adjacency_.resize(g.offsets_[node_count]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adjacency_[cursor[e.u]++] = e.v;
    g.adjacency_[cursor[e.v]++] = e.u;
  }
  // Canonical edge order already sorts each neighbor list's additions for
  // the u side; the v side needs a per-list sort.
  for (NodeId v = 0; v < node_count; ++v) {
    std::sort(g.adjacency_.begin() + g.offsets_[v],
              g.adjacency_.begin() + g.offsets_[v + 1]);
  }

  if (dropped) *dropped = discarded;
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

bool Graph::check_consistency() const {
  for (NodeId v = 0; v < node_count_; ++v) {
    const auto nbrs = neighbors(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (nbrs[i] == v) return false;                      // self-loop
      if (i > 0 && nbrs[i] <= nbrs[i - 1]) return false;   // unsorted or dup
      if (!has_edge(nbrs[i], v)) return false;             // asymmetric
    }
  }
  std::size_t directed = 0;
  for (NodeId v = 0; v < node_count_; ++v) directed += degree(v);
  return directed == 2 * edges_.size();
}

}  // namespace tug
