#include "lrcmcf/solver.hpp"

#include "lrcmcf/clusters.hpp"
#include "lrcmcf/error.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace lrcmcf {

void validate_config(const SolverConfig& config, int n_samples) {
  if (config.k_neighbors < 1 || config.k_neighbors > n_samples - 2) {
    throw ConfigError("K=" + std::to_string(config.k_neighbors) + " outside [1, N-2] for N=" +
                      std::to_string(n_samples));
  }
  if (config.n_clusters < 2) {
    throw ConfigError("cluster count " + std::to_string(config.n_clusters) + " below 2");
  }
  if (config.n_clusters > n_samples) {
    // The data, not the flag, is what is inconsistent here.
    throw ValidationError("cluster count " + std::to_string(config.n_clusters) +
                          " exceeds the " + std::to_string(n_samples) + " samples");
  }
  if (config.max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (!(config.tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(config.r > 1.0)) throw ConfigError("r must exceed 1");
  if (config.lambda.kind == LambdaMode::Kind::kFixed && !(config.lambda.value > 0.0)) {
    throw ConfigError("fixed lambda must be positive");
  }
  if (config.beta_adaptive ? !(config.beta_init > 0.0) : !(config.beta_init >= 0.0)) {
    throw ConfigError(config.beta_adaptive ? "adaptive beta needs beta_init > 0"
                                           : "beta must be nonnegative");
  }
}

double objective(std::span<const ViewAffinity> views,
                 std::span<const DistanceMatrix> distances, const Matrix& s_star,
                 const ViewWeights& weights, const Matrix& f,
                 std::span<const Vector> lambdas, double beta) {
  const auto m = views.size();
  if (distances.size() != m || lambdas.size() != m ||
      weights.w.size() != static_cast<Eigen::Index>(m)) {
    throw ValidationError("objective: views, distances, lambdas and weights disagree in count");
  }
  const int n = static_cast<int>(s_star.rows());
  if (s_star.cols() != n || f.rows() != n) {
    throw ValidationError("objective: consensus graph and embedding disagree in size");
  }
  for (std::size_t v = 0; v < m; ++v) {
    if (views[v].size() != n || distances[v].size() != n || lambdas[v].size() != n) {
      throw ValidationError("objective: view " + std::to_string(v) + " has the wrong size");
    }
  }

  double view_terms = 0.0;
  for (std::size_t v = 0; v < m; ++v) {
    const ViewAffinity& view = views[v];
    for (int i = 0; i < n; ++i) {
      for (int slot = 0; slot < view.k; ++slot) {
        const double s = view.weights(i, slot);
        view_terms += distances[v].values(i, view.neighbors(i, slot)) * s + lambdas[v][i] * s * s;
      }
    }
  }

  const Vector divergences = view_divergences(s_star, views);
  const double fusion = weights.powered().dot(divergences);

  double graph_term = 0.0;
  if (beta != 0.0) {
    std::vector<double> per_row(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        const double s = s_star(i, j);
        if (s != 0.0) row += s * (f.row(i) - f.row(j)).squaredNorm();
      }
      per_row[static_cast<std::size_t>(i)] = row;
    }
    for (double row : per_row) graph_term += row;
  }
  return view_terms + fusion + beta * graph_term;
}

double objective(std::span<const ViewAffinity> views,
                 std::span<const DistanceMatrix> distances, const Matrix& s_star,
                 const ViewWeights& weights, const Matrix& f, double lambda, double beta) {
  std::vector<Vector> lambdas;
  for (const auto& view : views) lambdas.push_back(Vector::Constant(view.size(), lambda));
  return objective(views, distances, s_star, weights, f, lambdas, beta);
}

FitResult fit(const MultiViewDataset& data, const SolverConfig& config) {
  validate_dataset(data);
  const int n = data.size();
  const int m = data.view_count();
  const int c = config.n_clusters;
  validate_config(config, n);

  using Clock = std::chrono::steady_clock;

  FitResult result;
  std::vector<DistanceMatrix> distances;
  std::vector<NeighborSets> neighbors;
  distances.reserve(m);
  neighbors.reserve(m);
  for (int v = 0; v < m; ++v) {
    distances.push_back(pairwise_distances(data.views[v], config.standardize, v));
    neighbors.push_back(knn_sets(distances.back(), config.k_neighbors));
    result.views.push_back(init_view_affinity(distances.back(), neighbors.back(),
                                              config.lambda, v));
  }

  switch (config.lambda.kind) {
    case LambdaMode::Kind::kFixed:
      result.lambdas.assign(m, Vector::Constant(n, config.lambda.value));
      break;
    case LambdaMode::Kind::kAuto: {
      double sum = 0.0;
      for (const auto& view : result.views) sum += view.lambda.sum();
      result.lambdas.assign(m, Vector::Constant(n, sum / (static_cast<double>(n) * m)));
      break;
    }
    case LambdaMode::Kind::kAutoPerRow:
      for (const auto& view : result.views) result.lambdas.push_back(view.lambda);
      break;
  }

  result.weights = ViewWeights::uniform(m, config.r);
  ConsensusGraph& graph = result.graph;
  graph.beta = config.beta_init;
  graph.s_star = update_consensus(result.views, result.weights.powered(), Matrix(), 0.0);
  {
    Embedding emb = update_embedding(graph.s_star, c);
    graph.laplacian = std::move(emb.laplacian);
    graph.embedding = std::move(emb.f);
    graph.eigenvalues = std::move(emb.theta);
  }

  SolverTrace& trace = result.trace;
  trace.initial_objective = objective(result.views, distances, graph.s_star, result.weights,
                                      graph.embedding, result.lambdas, graph.beta);
  double previous = trace.initial_objective;

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const auto start = Clock::now();

    // View graphs and weights, interleaved view by view.
    for (int v = 0; v < m; ++v) {
      const double fusion_weight = std::pow(result.weights.w[v], config.r);
      result.views[v] = update_view_affinity(distances[v], neighbors[v], graph.s_star,
                                             fusion_weight, result.lambdas[v], v);
      result.weights = update_weights(view_divergences(graph.s_star, result.views), config.r);
    }

    const Matrix e = graph.beta > 0.0 ? embedding_distances(graph.embedding) : Matrix();
    graph.s_star = update_consensus(result.views, result.weights.powered(), e, graph.beta);

    Embedding emb = update_embedding(graph.s_star, c);
    graph.laplacian = std::move(emb.laplacian);
    graph.embedding = std::move(emb.f);
    graph.eigenvalues = std::move(emb.theta);

    IterationRecord record;
    record.iter = iter;
    record.beta = graph.beta;
    record.objective = objective(result.views, distances, graph.s_star, result.weights,
                                 graph.embedding, result.lambdas, graph.beta);
    record.fusion_residual =
        result.weights.powered().dot(view_divergences(graph.s_star, result.views));
    record.eig_sum = graph.eigenvalues.head(c).sum();
    record.components =
        extract_components(graph.s_star, default_component_eps(graph.s_star)).count;
    record.weights = result.weights.w;
    record.relative_change = std::abs(record.objective - previous) /
                             std::max(std::abs(previous), std::numeric_limits<double>::min());
    previous = record.objective;

    bool converged = record.relative_change <= config.tol;
    if (config.beta_adaptive) converged = converged && record.components == c;
    if (!converged && config.beta_adaptive) {
      graph.beta = adapt_beta(graph.eigenvalues, c, graph.beta,
                              zero_tolerance(graph.laplacian));
    }
    record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    trace.records.push_back(std::move(record));
    trace.iterations_run = iter;
    if (converged) {
      trace.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace lrcmcf
