#pragma once

#include "lrcmcf/linalg.hpp"
#include "lrcmcf/view_graph.hpp"

#include <span>

namespace lrcmcf {

// The fused graph S* together with the spectral quantities derived from it.
struct ConsensusGraph {
  Matrix s_star;      // row-stochastic
  Matrix laplacian;   // of (S* + S*^T) / 2
  Matrix embedding;   // N x c, orthonormal columns
  Vector eigenvalues; // c smallest (plus the (c+1)-th when N > c), ascending
  double beta = 1.0;
};

// e_ij = |f_i - f_j|^2 over rows of the embedding.
Matrix embedding_distances(const Matrix& f);

// Row i minimizes  sum_v W_v |p - S^v_i|^2 + beta <p, e_i>  over the simplex,
// where W_v = fusion_weights[v] = (w_v)^r. With beta == 0, `e` may be empty.
Matrix update_consensus(std::span<const ViewAffinity> views, const Vector& fusion_weights,
                        const Matrix& e, double beta);

double consensus_row_objective(std::span<const ViewAffinity> views,
                               const Vector& fusion_weights, const Matrix& e, double beta,
                               int row, const Vector& candidate);

struct Embedding {
  Matrix laplacian;
  Matrix f;
  Vector theta;
};

// Bottom-c eigenvectors of laplacian(s_star); theta additionally carries the
// (c+1)-th eigenvalue when it exists.
Embedding update_embedding(const Matrix& s_star, int c);

// Threshold under which a Laplacian eigenvalue counts as zero: 1e-6 times
// the mean degree.
double zero_tolerance(const Matrix& laplacian);

// Doubles beta while fewer than c eigenvalues are zero, halves it while more
// than c are, clamped to [1e-8, 1e8]. theta holds at least c values; the
// (c+1)-th is consulted when present.
double adapt_beta(const Vector& theta, int c, double beta, double zero_tol);

}  // namespace lrcmcf
