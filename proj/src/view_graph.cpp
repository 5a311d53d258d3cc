#include "lrcmcf/view_graph.hpp"

#include "lrcmcf/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lrcmcf {

namespace {

constexpr double kLambdaFloor = 1e-8;

void check_shapes(const DistanceMatrix& d, const NeighborSets& nbrs) {
  if (d.size() != nbrs.size()) {
    throw ValidationError("distance matrix has " + std::to_string(d.size()) +
                          " rows but neighbour sets have " +
                          std::to_string(nbrs.size()));
  }
}

ViewAffinity empty_affinity(const NeighborSets& nbrs, int view_id) {
  ViewAffinity out;
  out.view_id = view_id;
  out.k = nbrs.k;
  out.neighbors = nbrs.neighbors;
  out.weights.resize(nbrs.size(), nbrs.k);
  out.lambda.resize(nbrs.size());
  return out;
}

}  // namespace

double ViewAffinity::at(int i, int j) const {
  for (int slot = 0; slot < k; ++slot) {
    if (neighbors(i, slot) == j) return weights(i, slot);
  }
  return 0.0;
}

Matrix ViewAffinity::dense() const {
  Matrix out = Matrix::Zero(size(), size());
  for (int i = 0; i < size(); ++i) {
    for (int slot = 0; slot < k; ++slot) out(i, neighbors(i, slot)) = weights(i, slot);
  }
  return out;
}

ViewAffinity init_view_affinity(const DistanceMatrix& d, const NeighborSets& nbrs,
                                LambdaMode mode, int view_id) {
  check_shapes(d, nbrs);
  if (mode.kind == LambdaMode::Kind::kFixed) {
    if (!(mode.value > 0.0)) throw ConfigError("fixed lambda must be positive");
    const Matrix no_consensus = Matrix::Zero(0, 0);
    return update_view_affinity(d, nbrs, no_consensus, 0.0, mode.value, view_id);
  }

  ViewAffinity out = empty_affinity(nbrs, view_id);
  const int n = nbrs.size();
  const int k = nbrs.k;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double boundary = d.values(i, nbrs.boundary_index[i]);
    double support_sum = 0.0;
    for (int slot = 0; slot < k; ++slot) support_sum += d.values(i, nbrs.neighbors(i, slot));
    const double denom = k * boundary - support_sum;
    if (denom <= 1e-12 * std::max(1.0, boundary)) {
      // Every neighbour sits at the boundary distance: no preference left.
      out.weights.row(i).setConstant(1.0 / k);
      out.lambda[i] = kLambdaFloor;
      continue;
    }
    for (int slot = 0; slot < k; ++slot) {
      out.weights(i, slot) = (boundary - d.values(i, nbrs.neighbors(i, slot))) / denom;
    }
    out.lambda[i] = std::max(0.5 * denom, kLambdaFloor);
  }
  return out;
}

ViewAffinity update_view_affinity(const DistanceMatrix& d, const NeighborSets& nbrs,
                                  const Matrix& s_star, double fusion_weight,
                                  const Vector& lambda, int view_id) {
  check_shapes(d, nbrs);
  const int n = nbrs.size();
  const int k = nbrs.k;
  if (lambda.size() != n) {
    throw ValidationError("lambda has " + std::to_string(lambda.size()) +
                          " entries, expected " + std::to_string(n));
  }
  if (!(fusion_weight >= 0.0)) throw ConfigError("fusion weight must be nonnegative");
  if (!(lambda.minCoeff() > 0.0)) throw ConfigError("lambda must be positive");
  const bool fused = fusion_weight > 0.0;
  if (fused && (s_star.rows() != n || s_star.cols() != n)) {
    throw ValidationError("consensus graph must be " + std::to_string(n) + "x" +
                          std::to_string(n));
  }

  ViewAffinity out = empty_affinity(nbrs, view_id);
  out.lambda = lambda;
#pragma omp parallel
  {
    std::vector<double> row(k);
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      const double denom = 2.0 * (lambda[i] + fusion_weight);
      for (int slot = 0; slot < k; ++slot) {
        const int j = nbrs.neighbors(i, slot);
        const double pull = fused ? 2.0 * fusion_weight * s_star(i, j) : 0.0;
        row[slot] = (pull - d.values(i, j)) / denom;
      }
      project_to_simplex_inplace(row, scratch);
      for (int slot = 0; slot < k; ++slot) out.weights(i, slot) = row[slot];
    }
  }
  return out;
}

ViewAffinity update_view_affinity(const DistanceMatrix& d, const NeighborSets& nbrs,
                                  const Matrix& s_star, double fusion_weight,
                                  double lambda, int view_id) {
  if (!(lambda + fusion_weight > 0.0)) {
    throw ConfigError("lambda + fusion weight must be positive");
  }
  return update_view_affinity(d, nbrs, s_star, fusion_weight,
                              Vector::Constant(nbrs.size(), lambda), view_id);
}

double view_row_objective(const DistanceMatrix& d, const NeighborSets& nbrs,
                          const Matrix& s_star, int row, const Vector& candidate,
                          double fusion_weight, double lambda) {
  double value = 0.0;
  for (int slot = 0; slot < nbrs.k; ++slot) {
    const int j = nbrs.neighbors(row, slot);
    value += d.values(row, j) * candidate[slot] + lambda * candidate[slot] * candidate[slot];
  }
  if (fusion_weight > 0.0) {
    // |s - S*_i|^2 over the whole row: off-support entries of s are zero.
    double fusion = s_star.row(row).squaredNorm();
    for (int slot = 0; slot < nbrs.k; ++slot) {
      const double target = s_star(row, nbrs.neighbors(row, slot));
      fusion += (candidate[slot] - target) * (candidate[slot] - target) - target * target;
    }
    value += fusion_weight * fusion;
  }
  return value;
}

}  // namespace lrcmcf
