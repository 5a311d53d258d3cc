#pragma once

// Reference computations for the tests. Everything here is written against
// the mathematical definitions, not against the library code paths it checks.

#include "lrcmcf/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using lrcmcf::Matrix;
using lrcmcf::Vector;

inline Matrix brute_distances(const Matrix& x) {
  const auto n = x.rows();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double sum = 0.0;
      for (Eigen::Index f = 0; f < x.cols(); ++f) sum += (x(i, f) - x(j, f)) * (x(i, f) - x(j, f));
      d(i, j) = sum;
    }
  }
  return d;
}

// Full stable sort of every row by (distance, index).
inline std::vector<std::vector<int>> argsort_rows(const Matrix& d) {
  std::vector<std::vector<int>> out;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    std::vector<int> order;
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (j != i) order.push_back(static_cast<int>(j));
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return d(i, a) < d(i, b); });
    out.push_back(order);
  }
  return out;
}

// Michelot's active-set projection: repeatedly project onto the affine hull
// of the current support and drop the negative coordinates.
inline Vector michelot_projection(const Vector& v) {
  std::vector<bool> active(v.size(), true);
  Vector out = Vector::Zero(v.size());
  while (true) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (active[j]) {
        sum += v[j];
        ++count;
      }
    }
    const double shift = (sum - 1.0) / count;
    bool dropped = false;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (!active[j]) continue;
      if (v[j] - shift < 0.0) {
        active[j] = false;
        dropped = true;
      }
    }
    if (!dropped) {
      for (Eigen::Index j = 0; j < v.size(); ++j) out[j] = active[j] ? v[j] - shift : 0.0;
      return out;
    }
  }
}

// Projected gradient descent on the simplex.
inline Vector projected_gradient(const std::function<Vector(const Vector&)>& gradient,
                                 Eigen::Index m, double step, int iterations) {
  Vector s = Vector::Constant(m, 1.0 / static_cast<double>(m));
  for (int it = 0; it < iterations; ++it) s = michelot_projection(s - step * gradient(s));
  return s;
}

// Quadratic-form check of the Laplacian: 0.5 * sum_ij A_ij (x_i - x_j)^2.
inline double laplacian_quadratic(const Matrix& s, const Vector& x) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      const double a = 0.5 * (s(i, j) + s(j, i));
      total += 0.5 * a * (x[i] - x[j]) * (x[i] - x[j]);
    }
  }
  return total;
}

// Union-find over edges (i, j) with (s_ij + s_ji) / 2 > eps; returns labels
// renumbered by first appearance.
inline std::vector<int> union_find_labels(const Matrix& s, double eps) {
  const auto n = s.rows();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && 0.5 * (s(i, j) + s(j, i)) > eps) {
        parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
      }
    }
  }
  std::map<int, int> renumber;
  std::vector<int> labels(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int root = find(static_cast<int>(i));
    auto it = renumber.find(root);
    if (it == renumber.end()) it = renumber.emplace(root, static_cast<int>(renumber.size())).first;
    labels[i] = it->second;
  }
  return labels;
}

// True when two labelings describe the same set partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> forward, backward;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [f, fresh_f] = forward.emplace(a[i], b[i]);
    auto [g, fresh_g] = backward.emplace(b[i], a[i]);
    if (f->second != b[i] || g->second != a[i]) return false;
  }
  return true;
}

// Accuracy by trying every injective cluster -> class map.
inline double exhaustive_accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
  std::vector<int> classes(truth.begin(), truth.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  std::vector<int> clusters(pred.begin(), pred.end());
  std::sort(clusters.begin(), clusters.end());
  clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
  const std::size_t size = std::max(classes.size(), clusters.size());
  std::vector<int> targets(size);
  std::iota(targets.begin(), targets.end(), 0);  // indices into classes; >= classes.size() = unmatched
  long best = 0;
  do {
    long matched = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const auto cluster_index = std::lower_bound(clusters.begin(), clusters.end(), pred[i]) - clusters.begin();
      const auto target = static_cast<std::size_t>(targets[cluster_index]);
      if (target < classes.size() && classes[target] == truth[i]) ++matched;
    }
    best = std::max(best, matched);
  } while (std::next_permutation(targets.begin(), targets.end()));
  return static_cast<double>(best) / static_cast<double>(truth.size());
}

// NMI straight from the counting definition.
inline double direct_nmi(const std::vector<int>& truth, const std::vector<int>& pred) {
  const double n = static_cast<double>(truth.size());
  std::map<int, double> n_class, n_cluster;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    n_class[truth[i]] += 1;
    n_cluster[pred[i]] += 1;
    joint[{pred[i], truth[i]}] += 1;
  }
  double mi = 0.0;
  for (const auto& [key, count] : joint) {
    mi += count / n * std::log(n * count / (n_cluster[key.first] * n_class[key.second]));
  }
  double h_true = 0.0, h_pred = 0.0;
  for (const auto& [id, count] : n_class) h_true -= count / n * std::log(count / n);
  for (const auto& [id, count] : n_cluster) h_pred -= count / n * std::log(count / n);
  return mi / std::sqrt(h_true * h_pred);
}

// Purity by explicit set intersections.
inline double brute_purity(const std::vector<int>& truth, const std::vector<int>& pred) {
  std::map<int, std::set<std::size_t>> by_cluster, by_class;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    by_cluster[pred[i]].insert(i);
    by_class[truth[i]].insert(i);
  }
  double total = 0.0;
  for (const auto& [cluster, members] : by_cluster) {
    std::size_t best = 0;
    for (const auto& [cls, cls_members] : by_class) {
      std::vector<std::size_t> common;
      std::set_intersection(members.begin(), members.end(), cls_members.begin(), cls_members.end(),
                            std::back_inserter(common));
      best = std::max(best, common.size());
    }
    total += static_cast<double>(best);
  }
  return total / static_cast<double>(truth.size());
}

inline Vector random_simplex_point(std::mt19937_64& rng, Eigen::Index m) {
  std::exponential_distribution<double> expo(1.0);
  Vector w(m);
  for (Eigen::Index v = 0; v < m; ++v) w[v] = expo(rng);
  return w / w.sum();
}

}  // namespace oracle
