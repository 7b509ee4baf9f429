#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tug/graph.hpp"

namespace tug {

enum class MaskKind : std::uint8_t { None = 0, Train = 1, Valid = 2, Test = 3 };

// Per-node class ids with train/valid/test masks. class_of is -1 for
// unlabeled nodes; labeled classes are contiguous 0..num_classes-1.
struct Labels {
  std::vector<std::int32_t> class_of;
  std::vector<MaskKind> mask;
  std::int32_t num_classes = 0;

  std::size_t count(MaskKind kind) const;
};

// Text format: "node_id class_id mask" per line, mask in {train,valid,test}.
Labels load_labels(const std::filesystem::path& path, NodeId node_count);
void save_labels(const Labels& labels, const std::filesystem::path& path);

}  // namespace tug
