#include "tug/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "tug/error.hpp"
#include "tug/rng.hpp"

namespace tug {

namespace {

constexpr std::uint64_t kEdgeTag = 0x01aa;
constexpr std::uint64_t kFeatureTag = 0x02bb;
constexpr std::uint64_t kCorruptTag = 0x03cc;
constexpr std::uint64_t kMaskTag = 0x04dd;

void matching_edges(std::size_t n, std::vector<Edge>& edges) {
  edges.reserve(n / 2);
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    edges.push_back({static_cast<NodeId>(k), static_cast<NodeId>(k + 1)});
  }
}

SynthResult make_fig2a(const SynthSpec& spec) {
  std::vector<Edge> edges;
  matching_edges(spec.n, edges);
  FeatureMatrix features(spec.n, spec.d);
  Rng rng(derive_seed(spec.seed, kFeatureTag));
  for (const Edge& e : edges) {
    auto a = features.row(e.u);
    auto b = features.row(e.v);
    for (std::size_t k = 0; k < spec.d; ++k) {
      a[k] = static_cast<float>(rng.gaussian());
      b[k] = a[k];
    }
  }
  SynthResult result;
  result.graph = Graph::from_edges(static_cast<NodeId>(spec.n),
                                   std::move(edges));
  result.features = std::move(features);
  return result;
}

SynthResult make_fig2b(const SynthSpec& spec) {
  if (spec.d < 2) {
    throw ValidationError(
        "complementary binary patterns need feature dim >= 2");
  }
  std::vector<Edge> edges;
  matching_edges(spec.n, edges);
  FeatureMatrix features(spec.n, spec.d);
  Rng rng(derive_seed(spec.seed, kFeatureTag));
  for (const Edge& e : edges) {
    auto a = features.row(e.u);
    auto b = features.row(e.v);
    // Binary pattern and its complement; all-zero/all-one patterns are
    // redrawn so both endpoints have a nonzero norm.
    for (;;) {
      std::size_t ones = 0;
      for (std::size_t k = 0; k < spec.d; ++k) {
        const bool bit = rng.below(2) == 1;
        a[k] = bit ? 1.0f : 0.0f;
        b[k] = bit ? 0.0f : 1.0f;
        ones += bit;
      }
      if (ones > 0 && ones < spec.d) break;
    }
  }
  SynthResult result;
  result.graph = Graph::from_edges(static_cast<NodeId>(spec.n),
                                   std::move(edges));
  result.features = std::move(features);
  return result;
}

std::vector<std::size_t> community_sizes(std::size_t n, std::size_t c) {
  std::vector<std::size_t> sizes(c, n / c);
  for (std::size_t i = 0; i < n % c; ++i) ++sizes[i];
  return sizes;
}

SynthResult make_planted(const SynthSpec& spec) {
  const std::size_t c = spec.communities;
  const auto sizes = community_sizes(spec.n, c);
  std::vector<std::int32_t> community(spec.n);
  std::vector<std::size_t> start(c + 1, 0);
  for (std::size_t a = 0; a < c; ++a) {
    start[a + 1] = start[a] + sizes[a];
    for (std::size_t v = start[a]; v < start[a + 1]; ++v) {
      community[v] = static_cast<std::int32_t>(a);
    }
  }

  Rng edge_rng(derive_seed(spec.seed, kEdgeTag));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      const double p =
          community[i] == community[j] ? spec.p_in : spec.p_out;
      if (p > 0.0 && edge_rng.unit() < p) {
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  }

  Rng feat_rng(derive_seed(spec.seed, kFeatureTag));
  std::vector<double> prototypes(c * spec.d);
  for (double& x : prototypes) x = feat_rng.gaussian();
  FeatureMatrix features(spec.n, spec.d);
  for (std::size_t v = 0; v < spec.n; ++v) {
    const double* proto =
        prototypes.data() + static_cast<std::size_t>(community[v]) * spec.d;
    auto row = features.row(v);
    for (std::size_t k = 0; k < spec.d; ++k) {
      row[k] = static_cast<float>(proto[k] +
                                  spec.noise_sigma * feat_rng.gaussian());
    }
  }

  Labels labels;
  labels.class_of = community;
  labels.num_classes = static_cast<std::int32_t>(c);
  labels.mask.assign(spec.n, MaskKind::None);
  Rng mask_rng(derive_seed(spec.seed, kMaskTag));
  for (std::size_t a = 0; a < c; ++a) {
    std::vector<std::size_t> members(sizes[a]);
    std::iota(members.begin(), members.end(), start[a]);
    mask_rng.shuffle(members);
    const std::size_t n_train =
        static_cast<std::size_t>(std::llround(0.6 * double(members.size())));
    const std::size_t n_valid =
        static_cast<std::size_t>(std::llround(0.2 * double(members.size())));
    for (std::size_t i = 0; i < members.size(); ++i) {
      labels.mask[members[i]] = i < n_train ? MaskKind::Train
                                : i < n_train + n_valid ? MaskKind::Valid
                                                        : MaskKind::Test;
    }
  }

  SynthResult result;
  result.graph = Graph::from_edges(static_cast<NodeId>(spec.n),
                                   std::move(edges));
  result.features = std::move(features);
  result.labels = std::move(labels);
  return result;
}

SynthResult make_er(const SynthSpec& spec) {
  Rng edge_rng(derive_seed(spec.seed, kEdgeTag));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      if (edge_rng.unit() < spec.p_in) {
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
      }
    }
  }
  Rng feat_rng(derive_seed(spec.seed, kFeatureTag));
  FeatureMatrix features(spec.n, spec.d);
  for (float& x : features.values()) {
    x = static_cast<float>(feat_rng.gaussian());
  }
  SynthResult result;
  result.graph = Graph::from_edges(static_cast<NodeId>(spec.n),
                                   std::move(edges));
  result.features = std::move(features);
  return result;
}

void corrupt(FeatureMatrix& features, Corruption kind, std::uint64_t seed) {
  Rng rng(derive_seed(seed, kCorruptTag));
  switch (kind) {
    case Corruption::None:
      return;
    case Corruption::ShuffleRows: {
      for (std::size_t v = 0; v < features.rows(); ++v) {
        auto row = features.row(v);
        for (std::size_t i = row.size(); i > 1; --i) {
          std::swap(row[i - 1], row[rng.below(i)]);
        }
      }
      return;
    }
    case Corruption::GaussianOverwrite: {
      for (float& x : features.values()) {
        x = static_cast<float>(rng.gaussian());
      }
      return;
    }
    case Corruption::ShuffleNodes: {
      std::vector<std::size_t> perm(features.rows());
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      rng.shuffle(perm);
      FeatureMatrix shuffled(features.rows(), features.dim());
      for (std::size_t v = 0; v < features.rows(); ++v) {
        const auto src = features.row(perm[v]);
        auto dst = shuffled.row(v);
        std::copy(src.begin(), src.end(), dst.begin());
      }
      features = std::move(shuffled);
      return;
    }
  }
}

}  // namespace

void SynthSpec::validate() const {
  if (n < 1 || d < 1) throw ValidationError("n and d must be >= 1");
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1) {
    throw ValidationError("edge probabilities must lie in [0, 1]");
  }
  if (noise_sigma < 0) throw ValidationError("noise_sigma must be >= 0");
  if ((kind == SynthKind::Fig2a || kind == SynthKind::Fig2b) && n % 2 != 0) {
    throw ValidationError("matching constructions need an even node count");
  }
  if (kind == SynthKind::Planted) {
    if (communities < 2 || communities > n) {
      throw ValidationError("planted graphs need 2 <= communities <= n");
    }
  }
}

SynthResult generate(const SynthSpec& spec) {
  spec.validate();
  SynthResult result;
  switch (spec.kind) {
    case SynthKind::Fig2a:
      result = make_fig2a(spec);
      break;
    case SynthKind::Fig2b:
      result = make_fig2b(spec);
      break;
    case SynthKind::Planted:
      result = make_planted(spec);
      break;
    case SynthKind::ErRandom:
      result = make_er(spec);
      break;
  }
  corrupt(result.features, spec.corruption, spec.seed);
  return result;
}

}  // namespace tug
