#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace lrcmcf {

// Row-major storage throughout: every algorithm in this library walks
// matrices one sample (row) at a time.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Squared Euclidean distances between all pairs of samples of one view.
struct DistanceMatrix {
  Matrix values;
  int size() const { return static_cast<int>(values.rows()); }
};

// K nearest neighbours of every sample (itself excluded), ascending by
// distance with ties broken by the smaller index. boundary_index[i] is the
// (K+1)-th nearest sample, the first one left out of the support.
struct NeighborSets {
  int k = 0;
  IndexMatrix neighbors;
  std::vector<int> boundary_index;
  int size() const { return static_cast<int>(neighbors.rows()); }
};

struct EigenPairs {
  Vector values;   // ascending
  Matrix vectors;  // one orthonormal eigenvector per column
};

// Column-wise z-scoring with population variance. Columns with zero variance
// are set to 0.
Matrix standardize_columns(const Matrix& x);

// `view` only labels error messages; pass -1 when there is no view context.
DistanceMatrix pairwise_distances(const Matrix& x, bool standardize, int view = -1);

NeighborSets knn_sets(const DistanceMatrix& d, int k);

// Euclidean projection onto the probability simplex {s >= 0, sum s = 1}.
Vector project_to_simplex(const Vector& v);

// In-place variant for hot loops. `scratch` is resized as needed so callers
// can reuse one buffer across rows.
void project_to_simplex_inplace(std::span<double> v, std::vector<double>& scratch);

// Unnormalized Laplacian of the symmetrized graph A = (S + S^T) / 2.
Matrix laplacian(const Matrix& s);

// Connected components of the undirected graph with an edge (i, j) whenever
// (|m_ij| + |m_ji|) / 2 > eps, i != j. Component ids follow the smallest member
// index, ascending.
struct Components {
  std::vector<int> labels;
  int count = 0;
};
Components support_components(const Matrix& m, double eps);

// The `count` smallest eigenpairs of a symmetric PSD matrix, plus
// `extra_values` further eigenvalues (without vectors). Block-diagonal
// structure (after permutation) is detected and each block is solved
// separately; results are the same eigenpairs a full dense decomposition
// yields, up to rotation within repeated eigenvalues.
EigenPairs smallest_eigenpairs(const Matrix& l, int count, int extra_values = 0);

}  // namespace lrcmcf
