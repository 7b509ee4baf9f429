#include "tug/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "tug/error.hpp"

namespace tug {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Parses the next whitespace-delimited token as a signed integer.
bool next_int(std::string_view& s, std::int64_t& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || (ptr != end && *ptr != ' ' && *ptr != '\t')) {
    return false;
  }
  s.remove_prefix(static_cast<std::size_t>(ptr - begin));
  return true;
}

}  // namespace

EdgeListData load_edge_list(const std::filesystem::path& path,
                            bool write_remap) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list: " + path.string());

  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::int64_t declared_nodes = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      // "# nodes N" declares ids canonical 0..N-1 (keeps isolated nodes
      // across a save/load round trip); other comments are ignored.
      std::string_view rest = trim(s.substr(1));
      if (rest.substr(0, 5) == "nodes") {
        std::string_view num = rest.substr(5);
        std::int64_t n = -1;
        if (next_int(num, n) && n >= 0) declared_nodes = n;
      }
      continue;
    }
    std::int64_t a = 0, b = 0;
    if (!next_int(s, a) || !next_int(s, b) || !trim(s).empty()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected two integer node ids");
    }
    raw.emplace_back(a, b);
  }
  if (in.bad()) throw IoError("read failure on " + path.string());

  EdgeListData out;
  std::vector<Edge> edges;
  edges.reserve(raw.size());

  if (declared_nodes >= 0) {
    // Canonical mode: ids are already dense.
    for (auto [a, b] : raw) {
      if (a < 0 || b < 0 || a >= declared_nodes || b >= declared_nodes) {
        throw FormatError(path.string() + ": node id out of declared range [0, " +
                          std::to_string(declared_nodes) + ")");
      }
      edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
    }
    out.dense_ids = true;
    out.original_ids.resize(static_cast<std::size_t>(declared_nodes));
    for (std::size_t i = 0; i < out.original_ids.size(); ++i) {
      out.original_ids[i] = static_cast<std::int64_t>(i);
    }
    out.graph = Graph::from_edges(static_cast<NodeId>(declared_nodes),
                                  std::move(edges), &out.dropped_lines);
  } else {
    std::vector<std::int64_t> ids;
    ids.reserve(raw.size() * 2);
    for (auto [a, b] : raw) {
      ids.push_back(a);
      ids.push_back(b);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::unordered_map<std::int64_t, NodeId> remap;
    remap.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      remap.emplace(ids[i], static_cast<NodeId>(i));
    }
    for (auto [a, b] : raw) {
      edges.push_back({remap[a], remap[b]});
    }
    out.original_ids = std::move(ids);
    out.graph = Graph::from_edges(static_cast<NodeId>(out.original_ids.size()),
                                  std::move(edges), &out.dropped_lines);
  }

  if (out.graph.edge_count() == 0) {
    throw ValidationError("edge list " + path.string() +
                          " contains no usable edges");
  }

  if (write_remap) {
    const std::filesystem::path remap_path =
        path.string() + std::string(".remap");
    std::ofstream rm(remap_path);
    if (rm) {
      rm << "# original new\n";
      for (std::size_t i = 0; i < out.original_ids.size(); ++i) {
        rm << out.original_ids[i] << ' ' << i << '\n';
      }
    } else {
      std::fprintf(stderr, "warning: could not write remap table %s\n",
                   remap_path.string().c_str());
    }
  }

  return out;
}

void save_edge_list(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream outf(path);
  if (!outf) throw IoError("cannot write edge list: " + path.string());
  outf << "# nodes " << graph.node_count() << '\n';
  for (const Edge& e : graph.edges()) {
    outf << e.u << ' ' << e.v << '\n';
  }
  if (!outf) throw IoError("write failure on " + path.string());
}

}  // namespace tug
