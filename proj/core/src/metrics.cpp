#include "tug/metrics.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "tug/error.hpp"
#include "tug/parallel.hpp"

namespace tug {

namespace {

constexpr std::size_t kNodeChunk = 4096;
constexpr std::size_t kEdgeChunk = 8192;
constexpr double kVarianceFloor = 1e-12;

void require_compatible(const Graph& graph, const FeatureMatrix& features) {
  if (features.rows() != graph.node_count()) {
    throw ValidationError("feature rows (" + std::to_string(features.rows()) +
                          ") do not match node count (" +
                          std::to_string(graph.node_count()) + ")");
  }
  if (graph.edge_count() == 0) {
    throw ValidationError("metric undefined on an empty edge set");
  }
  if (features.dim() == 0) {
    throw ValidationError("feature dimension must be >= 1");
  }
}

// Mean feature vector over edge endpoints: each undirected edge contributes
// both of its endpoints, which equals degree-weighting the node features.
std::vector<double> edge_endpoint_mean(const Graph& graph,
                                       const FeatureMatrix& features,
                                       int threads) {
  const std::size_t d = features.dim();
  const std::size_t n = graph.node_count();
  using Vec = std::vector<double>;
  Vec zero(d, 0.0);
  Vec sum = reduce_chunks<Vec>(
      n, threads, kNodeChunk, zero,
      [&](std::size_t, std::size_t b, std::size_t e) {
        Vec part(d, 0.0);
        for (std::size_t v = b; v < e; ++v) {
          const auto deg = static_cast<double>(graph.degree(v));
          if (deg == 0.0) continue;
          const auto row = features.row(v);
          for (std::size_t k = 0; k < d; ++k) part[k] += deg * row[k];
        }
        return part;
      },
      [&](Vec acc, const Vec& p) {
        for (std::size_t k = 0; k < d; ++k) acc[k] += p[k];
        return acc;
      });
  const double denom = 2.0 * static_cast<double>(graph.edge_count());
  for (double& x : sum) x /= denom;
  return sum;
}

}  // namespace

HomophilyResult feature_homophily(const Graph& graph,
                                  const FeatureMatrix& features,
                                  int threads) {
  require_compatible(graph, features);
  const std::size_t d = features.dim();

  HomophilyResult result;
  result.edge_mean = edge_endpoint_mean(graph, features, threads);
  const std::vector<double>& mean = result.edge_mean;

  // Each undirected edge is counted in both orientations, which makes the
  // numerator and the two denominator sums coincide with a degree-weighted
  // variance; the score becomes an edgewise Pearson correlation.
  const double variance = reduce_chunks<double>(
      graph.node_count(), threads, kNodeChunk, 0.0,
      [&](std::size_t, std::size_t b, std::size_t e) {
        double part = 0.0;
        for (std::size_t v = b; v < e; ++v) {
          const auto deg = static_cast<double>(graph.degree(v));
          if (deg == 0.0) continue;
          const auto row = features.row(v);
          double norm2 = 0.0;
          for (std::size_t k = 0; k < d; ++k) {
            const double c = row[k] - mean[k];
            norm2 += c * c;
          }
          part += deg * norm2;
        }
        return part;
      },
      std::plus<double>());

  if (variance < kVarianceFloor) {
    result.defined = false;
    result.h_f = 0.0;
    return result;
  }

  const auto& edges = graph.edges();
  const double covariance = reduce_chunks<double>(
      edges.size(), threads, kEdgeChunk, 0.0,
      [&](std::size_t, std::size_t b, std::size_t e) {
        double part = 0.0;
        for (std::size_t i = b; i < e; ++i) {
          const auto xu = features.row(edges[i].u);
          const auto xv = features.row(edges[i].v);
          double prod = 0.0;
          for (std::size_t k = 0; k < d; ++k) {
            prod += (xu[k] - mean[k]) * (xv[k] - mean[k]);
          }
          part += prod;
        }
        return part;
      },
      std::plus<double>());

  result.defined = true;
  result.h_f = 2.0 * covariance / variance;
  return result;
}

SmoothnessResult feature_smoothness(const Graph& graph,
                                    const FeatureMatrix& features,
                                    int threads) {
  require_compatible(graph, features);
  const std::size_t d = features.dim();

  // Per node, sum feature differences against all neighbors, square the
  // resulting vector elementwise, and accumulate over nodes.
  using Vec = std::vector<double>;
  Vec zero(d, 0.0);
  Vec squares = reduce_chunks<Vec>(
      graph.node_count(), threads, kNodeChunk, zero,
      [&](std::size_t, std::size_t b, std::size_t e) {
        Vec part(d, 0.0);
        Vec diff(d, 0.0);
        for (std::size_t v = b; v < e; ++v) {
          const auto nbrs = graph.neighbors(v);
          if (nbrs.empty()) continue;
          const auto row = features.row(v);
          const auto deg = static_cast<double>(nbrs.size());
          for (std::size_t k = 0; k < d; ++k) diff[k] = deg * row[k];
          for (NodeId u : nbrs) {
            const auto other = features.row(u);
            for (std::size_t k = 0; k < d; ++k) diff[k] -= other[k];
          }
          for (std::size_t k = 0; k < d; ++k) part[k] += diff[k] * diff[k];
        }
        return part;
      },
      [&](Vec acc, const Vec& p) {
        for (std::size_t k = 0; k < d; ++k) acc[k] += p[k];
        return acc;
      });

  double l1 = 0.0;
  for (double x : squares) l1 += x;

  SmoothnessResult result;
  result.lambda_f =
      l1 / (static_cast<double>(graph.edge_count()) * static_cast<double>(d));
  return result;
}

CosineResult mean_edge_cosine(const Graph& graph,
                              const FeatureMatrix& features, int threads) {
  require_compatible(graph, features);
  const std::size_t d = features.dim();

  std::vector<double> norms(graph.node_count(), 0.0);
  for_chunks(graph.node_count(), threads, kNodeChunk,
             [&](std::size_t, std::size_t b, std::size_t e) {
               for (std::size_t v = b; v < e; ++v) {
                 const auto row = features.row(v);
                 double s = 0.0;
                 for (std::size_t k = 0; k < d; ++k) s += double(row[k]) * row[k];
                 norms[v] = std::sqrt(s);
               }
             });

  struct Partial {
    double sum = 0.0;
    std::size_t zero = 0;
  };
  const auto& edges = graph.edges();
  const Partial total = reduce_chunks<Partial>(
      edges.size(), threads, kEdgeChunk, Partial{},
      [&](std::size_t, std::size_t b, std::size_t e) {
        Partial part;
        for (std::size_t i = b; i < e; ++i) {
          const double nu = norms[edges[i].u];
          const double nv = norms[edges[i].v];
          if (nu == 0.0 || nv == 0.0) {
            ++part.zero;
            continue;
          }
          const auto xu = features.row(edges[i].u);
          const auto xv = features.row(edges[i].v);
          double prod = 0.0;
          for (std::size_t k = 0; k < d; ++k) prod += double(xu[k]) * xv[k];
          part.sum += prod / (nu * nv);
        }
        return part;
      },
      [](Partial a, const Partial& b) {
        a.sum += b.sum;
        a.zero += b.zero;
        return a;
      });

  CosineResult result;
  result.mean_cosine = total.sum / static_cast<double>(edges.size());
  result.zero_norm_edges = total.zero;
  return result;
}

}  // namespace tug
