#include "tug/split.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <string_view>

#include "tug/error.hpp"
#include "tug/rng.hpp"

namespace tug {

namespace {

constexpr std::uint64_t kShuffleTag = 0x5e67a1;
constexpr std::uint64_t kNegativeTag = 0x9b11c3;

std::vector<NodeId> sample_negatives(const Graph& full, NodeId source,
                                     std::size_t count, Rng& rng) {
  const NodeId n = full.node_count();
  if (full.degree(source) + 1 >= n) {
    throw ValidationError(
        "negative sampling impossible: node " + std::to_string(source) +
        " is adjacent to every other node");
  }
  std::vector<NodeId> negs;
  negs.reserve(count);
  while (negs.size() < count) {
    const NodeId cand = static_cast<NodeId>(rng.below(n));
    if (cand == source || full.has_edge(source, cand)) continue;
    negs.push_back(cand);
  }
  return negs;
}

}  // namespace

SplitResult split_edges(const Graph& full_graph, const SplitRatios& ratios,
                        std::size_t negatives_per_edge, std::uint64_t seed) {
  if (ratios.train <= 0 || ratios.valid <= 0 || ratios.test <= 0) {
    throw ValidationError("split ratios must all be positive");
  }
  if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-6) {
    throw ValidationError("split ratios must sum to 1");
  }
  if (negatives_per_edge < 1) {
    throw ValidationError("negatives_per_edge must be >= 1");
  }

  const std::size_t total = full_graph.edge_count();
  const auto n_valid =
      static_cast<std::size_t>(std::llround(ratios.valid * total));
  const auto n_test =
      static_cast<std::size_t>(std::llround(ratios.test * total));
  if (n_valid == 0 || n_test == 0 || n_valid + n_test >= total) {
    throw ValidationError("graph too small to honor split ratios: " +
                          std::to_string(total) + " edges");
  }
  const std::size_t n_train = total - n_valid - n_test;

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(derive_seed(seed, kShuffleTag));
  shuffle_rng.shuffle(order);

  const auto& all = full_graph.edges();
  SplitSet split;
  split.valid_edges.reserve(n_valid);
  split.test_edges.reserve(n_test);
  split.train_edges.reserve(n_train);
  for (std::size_t i = 0; i < total; ++i) {
    const Edge& e = all[order[i]];
    if (i < n_valid) {
      split.valid_edges.push_back(e);
    } else if (i < n_valid + n_test) {
      split.test_edges.push_back(e);
    } else {
      split.train_edges.push_back(e);
    }
  }

  Rng neg_rng(derive_seed(seed, kNegativeTag));
  split.valid_negatives.reserve(n_valid);
  for (const Edge& e : split.valid_edges) {
    split.valid_negatives.push_back(
        sample_negatives(full_graph, e.u, negatives_per_edge, neg_rng));
  }
  split.test_negatives.reserve(n_test);
  for (const Edge& e : split.test_edges) {
    split.test_negatives.push_back(
        sample_negatives(full_graph, e.u, negatives_per_edge, neg_rng));
  }

  SplitResult result;
  result.train_graph =
      Graph::from_edges(full_graph.node_count(), split.train_edges);
  result.split = std::move(split);
  return result;
}

Graph rebuild_full_graph(const Graph& train_graph, const SplitSet& split) {
  std::vector<Edge> edges = train_graph.edges();
  edges.insert(edges.end(), split.valid_edges.begin(),
               split.valid_edges.end());
  edges.insert(edges.end(), split.test_edges.begin(), split.test_edges.end());
  return Graph::from_edges(train_graph.node_count(), std::move(edges));
}

bool holdout_excluded(const Graph& train_graph, const SplitSet& split) {
  for (const Edge& e : split.valid_edges) {
    if (train_graph.has_edge(e.u, e.v)) return false;
  }
  for (const Edge& e : split.test_edges) {
    if (train_graph.has_edge(e.u, e.v)) return false;
  }
  return true;
}

namespace {

void write_section(std::ofstream& out, const char* name,
                   const std::vector<Edge>& edges,
                   const std::vector<std::vector<NodeId>>* negatives) {
  out << name << ' ' << edges.size();
  if (negatives) {
    out << ' ' << (edges.empty() ? 0 : (*negatives)[0].size());
  }
  out << '\n';
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out << edges[i].u << ' ' << edges[i].v;
    if (negatives) {
      for (NodeId n : (*negatives)[i]) out << ' ' << n;
    }
    out << '\n';
  }
}

}  // namespace

void save_split(const SplitSet& split, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write split file: " + path.string());
  out << "tugsplit 1\n";
  write_section(out, "train", split.train_edges, nullptr);
  write_section(out, "valid", split.valid_edges, &split.valid_negatives);
  write_section(out, "test", split.test_edges, &split.test_negatives);
  if (!out) throw IoError("write failure on " + path.string());
}

SplitSet load_split(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open split file: " + path.string());

  std::string word;
  std::uint32_t version = 0;
  in >> word >> version;
  if (!in || word != "tugsplit" || version != 1) {
    throw FormatError("not a version-1 split file: " + path.string());
  }

  SplitSet split;
  auto read_section = [&](const char* name, std::vector<Edge>& edges,
                          std::vector<std::vector<NodeId>>* negatives) {
    std::size_t count = 0, num_neg = 0;
    in >> word >> count;
    if (!in || word != name) {
      throw FormatError("expected section '" + std::string(name) + "' in " +
                        path.string());
    }
    if (negatives) in >> num_neg;
    edges.resize(count);
    if (negatives) negatives->assign(count, {});
    for (std::size_t i = 0; i < count; ++i) {
      in >> edges[i].u >> edges[i].v;
      if (negatives) {
        (*negatives)[i].resize(num_neg);
        for (std::size_t k = 0; k < num_neg; ++k) in >> (*negatives)[i][k];
      }
      if (!in) {
        throw FormatError("truncated '" + std::string(name) + "' section in " +
                          path.string());
      }
    }
  };
  read_section("train", split.train_edges, nullptr);
  read_section("valid", split.valid_edges, &split.valid_negatives);
  read_section("test", split.test_edges, &split.test_negatives);
  return split;
}

}  // namespace tug
