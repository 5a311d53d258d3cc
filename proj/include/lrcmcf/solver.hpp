#pragma once

#include "lrcmcf/consensus.hpp"
#include "lrcmcf/dataset.hpp"
#include "lrcmcf/view_graph.hpp"
#include "lrcmcf/weights.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lrcmcf {

struct SolverConfig {
  int k_neighbors = 10;
  int n_clusters = 2;
  LambdaMode lambda = LambdaMode::automatic();
  double r = 2.0;
  double beta_init = 1.0;
  bool beta_adaptive = true;
  int max_iters = 50;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  bool standardize = true;
};

// Throws ConfigError for unusable settings and ValidationError when c exceeds
// the number of samples.
void validate_config(const SolverConfig& config, int n_samples);

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double fusion_residual = 0.0;  // sum_v (w_v)^r |S* - S^v|_F^2
  double eig_sum = 0.0;          // sum of the c smallest Laplacian eigenvalues
  int components = 0;
  double beta = 0.0;             // beta used during this iteration
  Vector weights;
  double relative_change = 0.0;
  double seconds = 0.0;
};

struct SolverTrace {
  double initial_objective = 0.0;
  std::vector<IterationRecord> records;
  bool converged = false;
  int iterations_run = 0;
};

struct FitResult {
  ConsensusGraph graph;
  ViewWeights weights;
  std::vector<ViewAffinity> views;
  std::vector<Vector> lambdas;  // lambda per row, per view, used by the updates
  SolverTrace trace;
};

// Full model objective:
//   sum_v [ sum_ij d^v_ij S^v_ij + sum_i lambda^v_i |S^v_i|^2 ]
//   + sum_v (w_v)^r |S* - S^v|_F^2 + beta * sum_ij S*_ij |f_i - f_j|^2.
// The last term equals 2 beta tr(F^T L* F) for the symmetrized Laplacian and
// is exactly the graph term the consensus row update minimizes.
double objective(std::span<const ViewAffinity> views,
                 std::span<const DistanceMatrix> distances, const Matrix& s_star,
                 const ViewWeights& weights, const Matrix& f,
                 std::span<const Vector> lambdas, double beta);

double objective(std::span<const ViewAffinity> views,
                 std::span<const DistanceMatrix> distances, const Matrix& s_star,
                 const ViewWeights& weights, const Matrix& f, double lambda, double beta);

FitResult fit(const MultiViewDataset& data, const SolverConfig& config);

}  // namespace lrcmcf
