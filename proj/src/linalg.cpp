#include "lrcmcf/linalg.hpp"

#include "lrcmcf/error.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>
#include <utility>

namespace lrcmcf {

namespace {

std::string view_prefix(int view) {
  return view >= 0 ? "view " + std::to_string(view) + ": " : std::string();
}

// Infinity norm; bounds the spectral radius of a symmetric matrix.
double norm_bound(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

Matrix standardize_columns(const Matrix& x) {
  Matrix out = x;
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index col = 0; col < x.cols(); ++col) {
    const double mean = x.col(col).sum() / n;
    const double var = (x.col(col).array() - mean).square().sum() / n;
    if (var <= 0.0) {
      out.col(col).setZero();
      continue;
    }
    out.col(col) = (x.col(col).array() - mean) / std::sqrt(var);
  }
  return out;
}

DistanceMatrix pairwise_distances(const Matrix& x, bool standardize, int view) {
  const int n = static_cast<int>(x.rows());
  if (n < 2) {
    throw ValidationError(view_prefix(view) + "need at least 2 samples, got " +
                          std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (!std::isfinite(x(i, j))) {
        std::ostringstream msg;
        msg << view_prefix(view) << "non-finite feature at row " << i << ", column "
            << j;
        throw ValidationError(msg.str());
      }
    }
  }
  const Matrix features = standardize ? standardize_columns(x) : x;

  DistanceMatrix d;
  d.values.resize(n, n);
  // Row i fills (i, j) and (j, i) for j > i only, so rows never collide.
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    d.values(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double dist = (features.row(i) - features.row(j)).squaredNorm();
      d.values(i, j) = dist;
      d.values(j, i) = dist;
    }
  }
  return d;
}

NeighborSets knn_sets(const DistanceMatrix& d, int k) {
  const int n = d.size();
  if (k < 1 || k > n - 2) {
    throw ConfigError("neighbour count K=" + std::to_string(k) +
                      " must lie in [1, N-2] with N=" + std::to_string(n));
  }
  NeighborSets sets;
  sets.k = k;
  sets.neighbors.resize(n, k);
  sets.boundary_index.assign(n, -1);

#pragma omp parallel
  {
    std::vector<int> order(n - 1);
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      int pos = 0;
      for (int j = 0; j < n; ++j) {
        if (j != i) order[pos++] = j;
      }
      auto closer = [&](int a, int b) {
        const double da = d.values(i, a);
        const double db = d.values(i, b);
        return da < db || (da == db && a < b);
      };
      std::partial_sort(order.begin(), order.begin() + k + 1, order.end(), closer);
      for (int slot = 0; slot < k; ++slot) sets.neighbors(i, slot) = order[slot];
      sets.boundary_index[i] = order[k];
    }
  }
  return sets;
}

void project_to_simplex_inplace(std::span<double> v, std::vector<double>& scratch) {
  const std::size_t m = v.size();
  scratch.assign(v.begin(), v.end());
  std::sort(scratch.begin(), scratch.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    cumulative += scratch[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (scratch[j] - candidate > 0.0) threshold = candidate;
  }
  for (double& value : v) value = std::max(value - threshold, 0.0);
}

Vector project_to_simplex(const Vector& v) {
  if (v.size() < 1) throw ValidationError("simplex projection of an empty vector");
  if (!v.allFinite()) throw ValidationError("simplex projection of a non-finite vector");
  Vector out = v;
  std::vector<double> scratch;
  project_to_simplex_inplace(std::span<double>(out.data(), out.size()), scratch);
  return out;
}

Matrix laplacian(const Matrix& s) {
  if (s.rows() != s.cols()) {
    throw ValidationError("laplacian needs a square matrix");
  }
  if (!s.allFinite()) throw ValidationError("laplacian input has non-finite entries");
  if (s.size() > 0 && s.minCoeff() < 0.0) {
    throw ValidationError("laplacian input has negative entries");
  }
  Matrix a = 0.5 * (s + s.transpose());
  Matrix l = -a;
  l.diagonal() += a.rowwise().sum();
  return l;
}

Components support_components(const Matrix& m, double eps) {
  const int n = static_cast<int>(m.rows());
  Components out;
  out.labels.assign(n, -1);
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (out.labels[root] >= 0) continue;
    const int id = out.count++;
    out.labels[root] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (out.labels[j] >= 0 || j == i) continue;
        if (0.5 * (std::abs(m(i, j)) + std::abs(m(j, i))) > eps) {
          out.labels[j] = id;
          stack.push_back(j);
        }
      }
    }
  }
  return out;
}

namespace {

struct BlockSolve {
  std::vector<int> members;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd values;   // all eigenvalues of the block, ascending
  Eigen::MatrixXd vectors;  // leading eigenvectors, only for contributing blocks
  std::optional<Eigen::Tridiagonalization<Eigen::MatrixXd>> tri;
};

Eigen::MatrixXd extract_block(const Matrix& l, const std::vector<int>& members) {
  const auto size = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd block(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = 0; b < size; ++b) block(a, b) = l(members[a], members[b]);
  }
  return block;
}

void check_solver(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& solver,
                  Eigen::Index size) {
  if (solver.info() != Eigen::Success) {
    throw SolverError("symmetric eigensolver did not converge on a block of size " +
                      std::to_string(size));
  }
}

// LU with partial pivoting of the shifted tridiagonal T - sigma I, in the
// layout of LAPACK's gttrf; exactly singular pivots are nudged to `tiny`.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double sigma,
                       double tiny)
      : d_(diag.array() - sigma), du_(sub), dl_(sub), du2_(Eigen::VectorXd::Zero(diag.size())),
        swapped_(diag.size(), false) {
    const Eigen::Index n = d_.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] == 0.0) d_[i] = tiny;
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double upper = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = upper - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    if (n > 0 && d_[n - 1] == 0.0) d_[n - 1] = tiny;
  }

  void solve(Eigen::VectorXd& b) const {
    const Eigen::Index n = d_.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (swapped_[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl_[i] * b[i];
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      double acc = b[i];
      if (i + 1 < n) acc -= du_[i] * b[i + 1];
      if (i + 2 < n) acc -= du2_[i] * b[i + 2];
      b[i] = acc / d_[i];
    }
  }

 private:
  Eigen::VectorXd d_, du_, dl_, du2_;
  std::vector<bool> swapped_;
};

// Leading `count` eigenvectors of the tridiagonal (diag, sub) for the given
// ascending eigenvalues, by inverse iteration; vectors whose eigenvalues lie
// within a cluster are kept mutually orthogonal.
Eigen::MatrixXd tridiagonal_vectors(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                    const Eigen::VectorXd& values, int count, double scale) {
  const Eigen::Index n = diag.size();
  const double eps = std::numeric_limits<double>::epsilon();
  const double cluster = 1e-3 * scale;
  Eigen::MatrixXd z(n, count);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int j = 0; j < count; ++j) {
    int first = j;
    while (first > 0 && values[j] - values[first - 1] <= cluster) --first;
    // Separate coincident shifts slightly so each factorization differs.
    const double sigma = values[j] + (j - first) * 10.0 * eps * scale;
    const ShiftedTridiagonalLU lu(diag, sub, sigma, eps * scale);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = unit(rng);
    for (int step = 0; step < 4; ++step) {
      x.normalize();
      lu.solve(x);
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = first; k < j; ++k) x -= z.col(k).dot(x) * z.col(k);
      }
    }
    z.col(j) = x.normalized();
  }
  return z;
}

// Eigenvectors from the stored tridiagonalization, accepted only when their
// residuals and orthogonality hold on the block itself.
bool vectors_from_tridiagonal(BlockSolve& block, int count) {
  const auto& tri = *block.tri;
  const double scale = std::max(1.0, norm_bound(block.matrix));
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd sub = tri.subDiagonal();
  const Eigen::MatrixXd z = tridiagonal_vectors(diag, sub, block.values, count, scale);
  Eigen::MatrixXd u = tri.matrixQ() * z;
  const Eigen::MatrixXd residual = block.matrix * u - u * block.values.head(count).asDiagonal();
  const double drift =
      (u.transpose() * u - Eigen::MatrixXd::Identity(count, count)).cwiseAbs().maxCoeff();
  if (!(residual.colwise().norm().maxCoeff() <= 1e-10 * scale) || !(drift <= 1e-12)) return false;
  block.vectors = std::move(u);
  return true;
}

}  // namespace

EigenPairs smallest_eigenpairs(const Matrix& l, int count, int extra_values) {
  const int n = static_cast<int>(l.rows());
  if (l.cols() != n) throw ValidationError("eigensolver needs a square matrix");
  if (count < 1 || count > n) {
    throw ConfigError("eigenpair count " + std::to_string(count) + " outside [1, " +
                      std::to_string(n) + "]");
  }
  if (!l.allFinite()) throw ValidationError("eigensolver input has non-finite entries");
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  const double asymmetry = (l - l.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > 1e-10 * scale) {
    throw ValidationError("eigensolver input is not symmetric (max |L - L^T| = " +
                          std::to_string(asymmetry) + ")");
  }
  const int total = std::min(n, count + std::max(0, extra_values));

  const Components comps = support_components(l, 0.0);
  std::vector<BlockSolve> blocks(comps.count);
  for (int i = 0; i < n; ++i) blocks[comps.labels[i]].members.push_back(i);

  // Eigenvalues only per block; vectors are produced below for the blocks
  // that actually contribute to the `count` smallest.
  for (auto& block : blocks) {
    block.matrix = extract_block(l, block.members);
    if (block.matrix.rows() == 1) {
      block.values = block.matrix.col(0);
      block.vectors = Eigen::MatrixXd::Ones(1, 1);
      continue;
    }
    block.tri.emplace(block.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(block.tri->diagonal(), block.tri->subDiagonal(),
                                  Eigen::EigenvaluesOnly);
    check_solver(solver, block.matrix.rows());
    block.values = solver.eigenvalues();
  }

  // Merge the per-block spectra: (value, block, rank within block).
  std::vector<std::tuple<double, int, int>> merged;
  for (int b = 0; b < comps.count; ++b) {
    const int take = std::min<int>(total, static_cast<int>(blocks[b].values.size()));
    for (int r = 0; r < take; ++r) merged.emplace_back(blocks[b].values[r], b, r);
  }
  std::sort(merged.begin(), merged.end());
  merged.resize(total);

  std::vector<int> needed(comps.count, 0);
  for (int j = 0; j < count; ++j) {
    const auto [value, b, r] = merged[j];
    needed[b] = std::max(needed[b], r + 1);
  }

  for (int b = 0; b < comps.count; ++b) {
    BlockSolve& block = blocks[b];
    if (needed[b] == 0 || block.vectors.size() > 0) continue;
    const Eigen::MatrixXd& sub = block.matrix;
    const auto size = sub.rows();
    const double block_scale = std::max(1.0, norm_bound(sub));
    if (needed[b] == 1) {
      // A connected graph-Laplacian block has the constant vector as its
      // simple lowest eigenvector; accept it when the residual proves it.
      const Eigen::VectorXd u = Eigen::VectorXd::Constant(size, 1.0 / std::sqrt(size));
      const Eigen::VectorXd lu = sub * u;
      const double rayleigh = u.dot(lu);
      const double residual = (lu - rayleigh * u).norm();
      const bool simple = block.values[1] - block.values[0] > 1e-8 * block_scale;
      if (simple && residual <= 1e-12 * block_scale &&
          std::abs(rayleigh - block.values[0]) <= 1e-10 * block_scale) {
        block.vectors = u;
        continue;
      }
    }
    if (vectors_from_tridiagonal(block, needed[b])) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub);
    check_solver(solver, size);
    block.values = solver.eigenvalues();
    block.vectors = solver.eigenvectors();
  }

  EigenPairs out;
  out.values.resize(total);
  out.vectors = Matrix::Zero(n, count);
  for (int j = 0; j < total; ++j) {
    const auto [value, b, r] = merged[j];
    out.values[j] = blocks[b].values[r];
    if (j >= count) continue;
    const auto& members = blocks[b].members;
    for (std::size_t a = 0; a < members.size(); ++a) {
      out.vectors(members[a], j) = blocks[b].vectors(static_cast<Eigen::Index>(a), r);
    }
  }

  // Eigenvalues from different solves of the same block can differ in the
  // last bits; keep the output ascending.
  for (int j = 1; j < total; ++j) {
    if (out.values[j] < out.values[j - 1]) out.values[j] = out.values[j - 1];
  }

  const double limit = 1e-8 * std::max(1.0, norm_bound(l));
  const Matrix lf = l * out.vectors;
  for (int j = 0; j < count; ++j) {
    const double residual = (lf.col(j) - out.values[j] * out.vectors.col(j)).norm();
    if (!(residual <= limit)) {
      std::ostringstream msg;
      msg << "eigenpair " << j << " residual " << residual << " exceeds " << limit;
      throw SolverError(msg.str());
    }
  }
  return out;
}

}  // namespace lrcmcf
