#include "lrcmcf/clusters.hpp"

#include "lrcmcf/error.hpp"

#include <limits>
#include <numeric>
#include <random>

namespace lrcmcf {

const char* to_string(ClusterMethod method) {
  switch (method) {
    case ClusterMethod::kComponents:
      return "components";
    case ClusterMethod::kEmbeddingFallback:
      return "embedding_fallback";
  }
  return "unknown";
}

Components extract_components(const Matrix& s_star, double eps) {
  if (s_star.rows() != s_star.cols()) throw ValidationError("consensus graph must be square");
  if (!(eps >= 0.0)) throw ConfigError("component threshold must be nonnegative");
  return support_components(s_star, eps);
}

double default_component_eps(const Matrix& s_star) {
  if (s_star.size() == 0) return 0.0;
  const Vector degrees = 0.5 * (s_star.rowwise().sum() + s_star.colwise().sum().transpose());
  return 1e-8 * degrees.maxCoeff();
}

double within_cluster_ss(const Matrix& points, const std::vector<int>& labels, int c) {
  Matrix centroids = Matrix::Zero(c, points.cols());
  std::vector<int> counts(c, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    centroids.row(labels[i]) += points.row(static_cast<Eigen::Index>(i));
    ++counts[labels[i]];
  }
  for (int k = 0; k < c; ++k) {
    if (counts[k] > 0) centroids.row(k) /= counts[k];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    total += (points.row(static_cast<Eigen::Index>(i)) - centroids.row(labels[i])).squaredNorm();
  }
  return total;
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  double wcss = 0.0;
};

LloydRun lloyd(const Matrix& points, int c, std::mt19937_64& rng, int max_iter) {
  const int n = static_cast<int>(points.rows());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = 0; k < c; ++k) {
    std::uniform_int_distribution<int> pick(k, n - 1);
    std::swap(order[k], order[pick(rng)]);
  }
  Matrix centroids(c, points.cols());
  for (int k = 0; k < c; ++k) centroids.row(k) = points.row(order[k]);

  LloydRun run;
  run.labels.assign(n, -1);
  std::vector<double> dist(n);
  std::vector<int> counts(c);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int k = 0; k < c; ++k) {
        const double d = (points.row(i) - centroids.row(k)).squaredNorm();
        if (d < best_dist) {
          best_dist = d;
          best = k;
        }
      }
      dist[i] = best_dist;
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (int label : run.labels) ++counts[label];
    for (int k = 0; k < c; ++k) {
      if (counts[k] > 0) continue;
      // Re-seed at the worst-served sample that can be spared.
      int far = -1;
      for (int i = 0; i < n; ++i) {
        if (counts[run.labels[i]] > 1 && (far < 0 || dist[i] > dist[far])) far = i;
      }
      if (far < 0) break;
      --counts[run.labels[far]];
      run.labels[far] = k;
      counts[k] = 1;
      dist[far] = 0.0;
      centroids.row(k) = points.row(far);
      changed = true;
    }
    if (!changed) break;

    centroids.setZero();
    for (int i = 0; i < n; ++i) centroids.row(run.labels[i]) += points.row(i);
    for (int k = 0; k < c; ++k) centroids.row(k) /= counts[k];
  }
  run.wcss = within_cluster_ss(points, run.labels, c);
  return run;
}

}  // namespace

std::vector<int> kmeans(const Matrix& points, int c, std::uint64_t seed,
                        KMeansOptions options) {
  const int n = static_cast<int>(points.rows());
  if (c < 1 || c > n) {
    throw ConfigError("k-means needs 1 <= c <= N (c=" + std::to_string(c) +
                      ", N=" + std::to_string(n) + ")");
  }
  if (options.restarts < 1 || options.max_iter < 1) {
    throw ConfigError("k-means restarts and max_iter must be positive");
  }
  LloydRun best;
  bool have_best = false;
  for (int restart = 0; restart < options.restarts; ++restart) {
    std::seed_seq stream{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(stream);
    LloydRun run = lloyd(points, c, rng, options.max_iter);
    if (!have_best || run.wcss < best.wcss) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best.labels;
}

ClusteringResult assign_clusters(const ConsensusGraph& graph, int c, double eps,
                                 std::uint64_t seed) {
  const int n = static_cast<int>(graph.s_star.rows());
  if (c < 1 || c > n) throw ConfigError("cluster count must lie in [1, N]");
  const Components comps = extract_components(graph.s_star, eps);

  ClusteringResult result;
  result.component_count = comps.count;
  result.threshold_used = eps;
  if (comps.count == c) {
    result.method = ClusterMethod::kComponents;
    result.labels = comps.labels;
    return result;
  }

  result.method = ClusterMethod::kEmbeddingFallback;
  if (c == 1) {
    result.labels.assign(n, 0);
    return result;
  }
  if (graph.embedding.rows() != n || graph.embedding.cols() < c) {
    throw ValidationError("consensus graph carries no usable embedding for the fallback");
  }
  Matrix rows = graph.embedding.leftCols(c);
  for (int i = 0; i < n; ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) rows.row(i) /= norm;
  }
  result.labels = kmeans(rows, c, seed);
  return result;
}

}  // namespace lrcmcf
