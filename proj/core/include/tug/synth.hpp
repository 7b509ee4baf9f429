#pragma once

#include <cstdint>
#include <optional>

#include "tug/features.hpp"
#include "tug/graph.hpp"
#include "tug/labels.hpp"

namespace tug {

enum class SynthKind : std::uint8_t {
  Fig2a,     // perfect matching, endpoints share a per-edge feature (h = 1)
  Fig2b,     // perfect matching, complementary binary endpoints (h = -1)
  Planted,   // community graph with prototype features plus noise
  ErRandom,  // uniform random edges, independent random features
};

enum class Corruption : std::uint8_t {
  None,
  // Shuffles the d values inside each feature row with an independent
  // per-node permutation: alignment with the graph collapses while each
  // node keeps its own (permutation-invariant) value profile.
  ShuffleRows,
  // Replaces every feature row with fresh unit gaussian noise.
  GaussianOverwrite,
  // Exchanges whole rows between nodes with one global permutation,
  // detaching features from node identity entirely.
  ShuffleNodes,
};

struct SynthSpec {
  SynthKind kind = SynthKind::Planted;
  std::size_t n = 1000;
  std::size_t d = 16;
  std::size_t communities = 4;    // planted only
  double p_in = 0.1;              // planted intra-community / er edge prob
  double p_out = 0.002;           // planted inter-community edge prob
  double noise_sigma = 0.1;       // planted feature noise scale
  Corruption corruption = Corruption::None;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthResult {
  Graph graph;
  FeatureMatrix features;
  std::optional<Labels> labels;  // community ids for planted graphs
};

// Deterministic per seed; corruption is applied to the feature matrix
// last. Planted graphs get community labels with stratified 60/20/20
// train/valid/test masks, balanced within one node per community.
SynthResult generate(const SynthSpec& spec);

}  // namespace tug
