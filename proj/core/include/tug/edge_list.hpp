#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tug/graph.hpp"

namespace tug {

struct EdgeListData {
  Graph graph;
  // original_ids[new_id] = id that appeared in the file.
  std::vector<std::int64_t> original_ids;
  // Self-loop and duplicate-edge lines discarded during the load.
  std::size_t dropped_lines = 0;
  // True when the file carried a "# nodes N" directive and ids were taken
  // as already dense (no remapping).
  bool dense_ids = false;
};

// Reads a whitespace-separated edge list ("u v" per line, '#' comments
// ignored). Node ids are re-indexed densely 0..|V|-1 in ascending order of
// the original ids, except when a "# nodes N" directive declares the ids
// canonical; files written by save_edge_list carry that directive so a
// round trip preserves isolated nodes. When write_remap is set, the
// old->new table is persisted next to the input as "<path>.remap".
EdgeListData load_edge_list(const std::filesystem::path& path,
                            bool write_remap = true);

void save_edge_list(const Graph& graph, const std::filesystem::path& path);

}  // namespace tug
