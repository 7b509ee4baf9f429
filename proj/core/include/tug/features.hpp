#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "tug/graph.hpp"

namespace tug {

// Dense row-major |V| x d matrix of 32-bit node features.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t dim)
      : rows_(rows), dim_(dim), values_(rows * dim, 0.0f) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const float> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<float> row(std::size_t i) {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<float>& values() const noexcept { return values_; }
  std::vector<float>& values() noexcept { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

// TUGF container: magic "TUGF", u32 LE version, u64 LE node count,
// u64 LE dim, then node_count*dim float32 LE values row-major.
// Loading rejects non-finite payloads, naming the offending row.
FeatureMatrix load_features(const std::filesystem::path& path);

// Additionally checks that the header node count matches the graph.
FeatureMatrix load_features(const std::filesystem::path& path,
                            const Graph& graph);

// Round-trips bit-exactly through load_features.
void save_features(const FeatureMatrix& matrix,
                   const std::filesystem::path& path);

}  // namespace tug
