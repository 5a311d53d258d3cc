#pragma once

#include "lrcmcf/linalg.hpp"

namespace lrcmcf {

// How the per-view regularization weight lambda is chosen.
//   kAuto:       per-row closed form at initialization; the updates then use
//                one global lambda, the mean of those per-row values.
//   kAutoPerRow: the per-row values are kept for the updates too.
//   kFixed:      one user-supplied lambda everywhere.
struct LambdaMode {
  enum class Kind { kAuto, kAutoPerRow, kFixed };
  Kind kind = Kind::kAuto;
  double value = 0.0;  // used by kFixed only

  static LambdaMode automatic() { return {}; }
  static LambdaMode per_row() { return {Kind::kAutoPerRow, 0.0}; }
  static LambdaMode fixed(double lambda) { return {Kind::kFixed, lambda}; }
};

// Row-stochastic affinity of one view, stored compactly: row i has weights
// only on its K neighbours, weights(i, slot) belongs to column
// neighbors(i, slot).
struct ViewAffinity {
  int view_id = 0;
  int k = 0;
  IndexMatrix neighbors;
  Matrix weights;  // N x K
  // Lambda each row was solved with (per-row auto values after init).
  Vector lambda;

  int size() const { return static_cast<int>(weights.rows()); }
  double at(int i, int j) const;
  Matrix dense() const;
};

ViewAffinity init_view_affinity(const DistanceMatrix& d, const NeighborSets& nbrs,
                                LambdaMode mode, int view_id = 0);

// Row i minimizes  sum_j d_ij s_j + lambda_i |s|^2 + fusion_weight |s - S*_i|^2
// over the simplex restricted to the K neighbours of i. `fusion_weight` is the
// already-exponentiated view weight (w_v)^r.
ViewAffinity update_view_affinity(const DistanceMatrix& d, const NeighborSets& nbrs,
                                  const Matrix& s_star, double fusion_weight,
                                  const Vector& lambda, int view_id = 0);

ViewAffinity update_view_affinity(const DistanceMatrix& d, const NeighborSets& nbrs,
                                  const Matrix& s_star, double fusion_weight,
                                  double lambda, int view_id = 0);

// Value of the row objective above for an arbitrary candidate row given on
// the neighbour support.
double view_row_objective(const DistanceMatrix& d, const NeighborSets& nbrs,
                          const Matrix& s_star, int row, const Vector& candidate,
                          double fusion_weight, double lambda);

}  // namespace lrcmcf
