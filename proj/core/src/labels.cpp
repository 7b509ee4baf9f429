#include "tug/labels.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "tug/error.hpp"

namespace tug {

std::size_t Labels::count(MaskKind kind) const {
  return static_cast<std::size_t>(
      std::count(mask.begin(), mask.end(), kind));
}

Labels load_labels(const std::filesystem::path& path, NodeId node_count) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels file: " + path.string());

  Labels labels;
  labels.class_of.assign(node_count, -1);
  labels.mask.assign(node_count, MaskKind::None);

  std::int64_t node = 0;
  std::int64_t cls = 0;
  std::string mask_word;
  std::int32_t max_class = -1;
  while (in >> node >> cls >> mask_word) {
    if (node < 0 || node >= static_cast<std::int64_t>(node_count)) {
      throw ValidationError("label for out-of-range node " +
                            std::to_string(node) + " in " + path.string());
    }
    if (cls < 0) {
      throw ValidationError("unknown class id " + std::to_string(cls) +
                            " in " + path.string());
    }
    MaskKind kind;
    if (mask_word == "train") {
      kind = MaskKind::Train;
    } else if (mask_word == "valid") {
      kind = MaskKind::Valid;
    } else if (mask_word == "test") {
      kind = MaskKind::Test;
    } else {
      throw FormatError("bad mask '" + mask_word + "' in " + path.string());
    }
    labels.class_of[static_cast<std::size_t>(node)] =
        static_cast<std::int32_t>(cls);
    labels.mask[static_cast<std::size_t>(node)] = kind;
    max_class = std::max(max_class, static_cast<std::int32_t>(cls));
  }
  if (!in.eof()) throw FormatError("malformed labels file: " + path.string());

  labels.num_classes = max_class + 1;
  // Classes must be contiguous 0..C-1.
  std::vector<bool> seen(static_cast<std::size_t>(labels.num_classes), false);
  for (std::int32_t c : labels.class_of) {
    if (c >= 0) seen[static_cast<std::size_t>(c)] = true;
  }
  for (std::size_t c = 0; c < seen.size(); ++c) {
    if (!seen[c]) {
      throw ValidationError("class ids not contiguous: class " +
                            std::to_string(c) + " unused in " + path.string());
    }
  }
  return labels;
}

void save_labels(const Labels& labels, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write labels file: " + path.string());
  for (std::size_t v = 0; v < labels.class_of.size(); ++v) {
    if (labels.class_of[v] < 0) continue;
    const char* mask = "train";
    switch (labels.mask[v]) {
      case MaskKind::Train: mask = "train"; break;
      case MaskKind::Valid: mask = "valid"; break;
      case MaskKind::Test: mask = "test"; break;
      case MaskKind::None: continue;
    }
    out << v << ' ' << labels.class_of[v] << ' ' << mask << '\n';
  }
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace tug
