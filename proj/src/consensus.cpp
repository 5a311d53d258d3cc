#include "lrcmcf/consensus.hpp"

#include "lrcmcf/error.hpp"

#include <algorithm>
#include <vector>

namespace lrcmcf {

namespace {

void check_views(std::span<const ViewAffinity> views, const Vector& fusion_weights) {
  if (views.empty()) throw ValidationError("consensus update needs at least one view");
  if (fusion_weights.size() != static_cast<Eigen::Index>(views.size())) {
    throw ValidationError("one fusion weight per view expected");
  }
  if (!fusion_weights.allFinite() || fusion_weights.minCoeff() < 0.0) {
    throw ConfigError("fusion weights must be finite and nonnegative");
  }
  if (!(fusion_weights.sum() > 0.0)) throw ConfigError("all view weights are zero");
  const int n = views.front().size();
  for (const auto& view : views) {
    if (view.size() != n) throw ValidationError("views disagree on the sample count");
  }
}

// Unconstrained minimizer of the row objective, written into `row`.
void consensus_target(std::span<const ViewAffinity> views, const Vector& fusion_weights,
                      const Matrix& e, double beta, int i, std::span<double> row) {
  const double total = fusion_weights.sum();
  if (beta > 0.0) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = -0.5 * beta * e(i, j);
  } else {
    std::fill(row.begin(), row.end(), 0.0);
  }
  for (std::size_t v = 0; v < views.size(); ++v) {
    const double weight = fusion_weights[static_cast<Eigen::Index>(v)];
    if (weight == 0.0) continue;
    const ViewAffinity& view = views[v];
    for (int slot = 0; slot < view.k; ++slot) {
      row[view.neighbors(i, slot)] += weight * view.weights(i, slot);
    }
  }
  for (double& value : row) value /= total;
}

}  // namespace

Matrix embedding_distances(const Matrix& f) {
  if (!f.allFinite()) throw ValidationError("embedding has non-finite entries");
  const auto n = f.rows();
  Matrix e(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = (f.row(i) - f.row(j)).squaredNorm();
  }
  return e;
}

Matrix update_consensus(std::span<const ViewAffinity> views, const Vector& fusion_weights,
                        const Matrix& e, double beta) {
  check_views(views, fusion_weights);
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
  const int n = views.front().size();
  if (beta > 0.0 && (e.rows() != n || e.cols() != n)) {
    throw ValidationError("embedding distances must be " + std::to_string(n) + "x" +
                          std::to_string(n));
  }

  Matrix s_star(n, n);
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      std::span<double> row(s_star.row(i).data(), static_cast<std::size_t>(n));
      consensus_target(views, fusion_weights, e, beta, i, row);
      project_to_simplex_inplace(row, scratch);
    }
  }
  return s_star;
}

double consensus_row_objective(std::span<const ViewAffinity> views,
                               const Vector& fusion_weights, const Matrix& e, double beta,
                               int row, const Vector& candidate) {
  double value = 0.0;
  for (std::size_t v = 0; v < views.size(); ++v) {
    Vector diff = candidate;
    const ViewAffinity& view = views[v];
    for (int slot = 0; slot < view.k; ++slot) {
      diff[view.neighbors(row, slot)] -= view.weights(row, slot);
    }
    value += fusion_weights[static_cast<Eigen::Index>(v)] * diff.squaredNorm();
  }
  if (beta > 0.0) value += beta * e.row(row).dot(candidate);
  return value;
}

Embedding update_embedding(const Matrix& s_star, int c) {
  Embedding out;
  out.laplacian = laplacian(s_star);
  const int n = static_cast<int>(s_star.rows());
  EigenPairs pairs = smallest_eigenpairs(out.laplacian, c, n > c ? 1 : 0);
  out.f = std::move(pairs.vectors);
  out.theta = std::move(pairs.values);
  return out;
}

double zero_tolerance(const Matrix& laplacian) {
  const auto n = laplacian.rows();
  if (n == 0) return 1e-6;
  return 1e-6 * laplacian.diagonal().sum() / static_cast<double>(n);
}

double adapt_beta(const Vector& theta, int c, double beta, double zero_tol) {
  if (!(beta > 0.0)) throw ConfigError("beta must be positive to adapt");
  if (theta.size() < c) throw ValidationError("adapt_beta needs at least c eigenvalues");
  double next = beta;
  if (theta.head(c).sum() > zero_tol) {
    next = 2.0 * beta;
  } else if (theta.size() > c && theta[c] < zero_tol) {
    next = 0.5 * beta;
  }
  return std::clamp(next, 1e-8, 1e8);
}

}  // namespace lrcmcf
