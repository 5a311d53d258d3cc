#include "lrcmcf/baseline.hpp"

#include "lrcmcf/clusters.hpp"
#include "lrcmcf/error.hpp"
#include "lrcmcf/view_graph.hpp"

namespace lrcmcf {

BaselineResult spectral_concat(const MultiViewDataset& data, int c, int k,
                               std::uint64_t seed) {
  validate_dataset(data);
  const int n = data.size();
  if (c < 1 || c > n) throw ConfigError("cluster count must lie in [1, N]");

  Eigen::Index width = 0;
  for (const auto& view : data.views) width += view.cols();
  Matrix features(n, width);
  Eigen::Index offset = 0;
  for (const auto& view : data.views) {
    features.middleCols(offset, view.cols()) = standardize_columns(view);
    offset += view.cols();
  }

  const DistanceMatrix d = pairwise_distances(features, false);
  const NeighborSets nbrs = knn_sets(d, k);
  const ViewAffinity affinity = init_view_affinity(d, nbrs, LambdaMode::automatic());
  const EigenPairs pairs = smallest_eigenpairs(laplacian(affinity.dense()), c);

  Matrix rows = pairs.vectors;
  for (int i = 0; i < n; ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) rows.row(i) /= norm;
  }
  return {kmeans(rows, c, seed), "spectral_concat"};
}

}  // namespace lrcmcf
