#pragma once

#include "lrcmcf/consensus.hpp"
#include "lrcmcf/linalg.hpp"

#include <cstdint>
#include <vector>

namespace lrcmcf {

enum class ClusterMethod { kComponents, kEmbeddingFallback };

const char* to_string(ClusterMethod method);

struct ClusteringResult {
  std::vector<int> labels;
  ClusterMethod method = ClusterMethod::kComponents;
  int component_count = 0;
  double threshold_used = 0.0;
};

// Edge (i, j) iff (S*_ij + S*_ji) / 2 > eps. Labels are numbered by the
// smallest sample index in each component.
Components extract_components(const Matrix& s_star, double eps);

// 1e-8 times the largest row sum of (S* + S*^T) / 2.
double default_component_eps(const Matrix& s_star);

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
};

// Lloyd's algorithm from random distinct sample seeds, best of `restarts` by
// within-cluster sum of squares (ties keep the earlier restart). A cluster
// that empties out is re-seeded at the sample farthest from its centroid.
std::vector<int> kmeans(const Matrix& points, int c, std::uint64_t seed,
                        KMeansOptions options = {});

double within_cluster_ss(const Matrix& points, const std::vector<int>& labels, int c);

// Components of the consensus graph when there are exactly c of them,
// otherwise k-means on the row-normalized embedding.
ClusteringResult assign_clusters(const ConsensusGraph& graph, int c, double eps,
                                 std::uint64_t seed);

}  // namespace lrcmcf
