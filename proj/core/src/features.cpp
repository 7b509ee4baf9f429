#include "tug/features.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "tug/error.hpp"
#include "tug/version.hpp"

namespace tug {

namespace {

constexpr char kMagic[4] = {'T', 'U', 'G', 'F'};

static_assert(std::endian::native == std::endian::little,
              "TUGF i/o assumes a little-endian host");

template <class T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError("truncated TUGF file: " + path.string());
  return value;
}

}  // namespace

FeatureMatrix load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open feature file: " + path.string());

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("bad magic in " + path.string() +
                      " (expected TUGF)");
  }
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kTugfVersion) {
    throw FormatError("unsupported TUGF version " + std::to_string(version) +
                      " in " + path.string());
  }
  const auto rows = read_pod<std::uint64_t>(in, path);
  const auto dim = read_pod<std::uint64_t>(in, path);

  FeatureMatrix m(static_cast<std::size_t>(rows),
                  static_cast<std::size_t>(dim));
  in.read(reinterpret_cast<char*>(m.values().data()),
          static_cast<std::streamsize>(m.values().size() * sizeof(float)));
  if (!in) throw FormatError("truncated TUGF payload: " + path.string());

  for (std::size_t i = 0; i < m.values().size(); ++i) {
    if (!std::isfinite(m.values()[i])) {
      throw FormatError("non-finite value at row " +
                        std::to_string(i / (dim == 0 ? 1 : dim)) + " of " +
                        path.string());
    }
  }
  return m;
}

FeatureMatrix load_features(const std::filesystem::path& path,
                            const Graph& graph) {
  FeatureMatrix m = load_features(path);
  if (m.rows() != graph.node_count()) {
    throw ValidationError("feature file " + path.string() + " has " +
                          std::to_string(m.rows()) + " rows but graph has " +
                          std::to_string(graph.node_count()) + " nodes");
  }
  return m;
}

void save_features(const FeatureMatrix& matrix,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write feature file: " + path.string());
  out.write(kMagic, 4);
  write_pod<std::uint32_t>(out, kTugfVersion);
  write_pod<std::uint64_t>(out, matrix.rows());
  write_pod<std::uint64_t>(out, matrix.dim());
  out.write(
      reinterpret_cast<const char*>(matrix.values().data()),
      static_cast<std::streamsize>(matrix.values().size() * sizeof(float)));
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace tug
