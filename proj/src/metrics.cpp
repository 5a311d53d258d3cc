#include "lrcmcf/metrics.hpp"

#include "lrcmcf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace lrcmcf {

namespace {

void check_pair(LabelPair pair) {
  if (pair.y_true.size() != pair.y_pred.size()) {
    throw ValidationError("label lengths differ: " + std::to_string(pair.y_true.size()) +
                          " vs " + std::to_string(pair.y_pred.size()));
  }
  if (pair.y_true.empty()) throw ValidationError("no samples to evaluate");
  for (std::size_t i = 0; i < pair.y_true.size(); ++i) {
    if (pair.y_true[i] < 0 || pair.y_pred[i] < 0) {
      throw ValidationError("label ids must be nonnegative");
    }
  }
}

std::vector<int> densify(std::span<const int> ids) {
  std::map<int, int> index;
  for (int id : ids) index.emplace(id, 0);
  int next = 0;
  for (auto& [id, dense] : index) dense = next++;
  std::vector<int> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = index[ids[i]];
  return out;
}

double entropy(const std::vector<long>& counts, double n) {
  double h = 0.0;
  for (long count : counts) {
    if (count > 0) h -= (count / n) * std::log(count / n);
  }
  return h;
}

}  // namespace

std::vector<std::vector<long>> contingency(LabelPair pair) {
  check_pair(pair);
  const std::vector<int> truth = densify(pair.y_true);
  const std::vector<int> pred = densify(pair.y_pred);
  const int classes = *std::max_element(truth.begin(), truth.end()) + 1;
  const int clusters = *std::max_element(pred.begin(), pred.end()) + 1;
  std::vector<std::vector<long>> table(clusters, std::vector<long>(classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++table[pred[i]][truth[i]];
  return table;
}

// Shortest augmenting path formulation with row/column potentials, O(n^3).
std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), min_to(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::fill(min_to.begin(), min_to.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col0] = true;
      const int i0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double reduced = cost[i0 - 1][col - 1] - u[i0] - v[col];
        if (reduced < min_to[col]) {
          min_to[col] = reduced;
          way[col] = col0;
        }
        if (min_to[col] < delta) {
          delta = min_to[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          min_to[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int col = 1; col <= n; ++col) {
    if (match[col] != 0) assignment[match[col] - 1] = col - 1;
  }
  return assignment;
}

double accuracy(LabelPair pair) {
  const auto table = contingency(pair);
  const std::size_t clusters = table.size();
  const std::size_t classes = table.front().size();
  const std::size_t size = std::max(clusters, classes);
  // Maximize matches == minimize negated counts; padding rows/columns cost 0.
  std::vector<std::vector<double>> cost(size, std::vector<double>(size, 0.0));
  for (std::size_t a = 0; a < clusters; ++a) {
    for (std::size_t b = 0; b < classes; ++b) cost[a][b] = -static_cast<double>(table[a][b]);
  }
  const std::vector<int> assignment = hungarian_min_cost(cost);
  long matched = 0;
  for (std::size_t a = 0; a < clusters; ++a) {
    const auto b = static_cast<std::size_t>(assignment[a]);
    if (b < classes) matched += table[a][b];
  }
  return static_cast<double>(matched) / static_cast<double>(pair.y_true.size());
}

double nmi(LabelPair pair) {
  const auto table = contingency(pair);
  const double n = static_cast<double>(pair.y_true.size());
  const std::size_t clusters = table.size();
  const std::size_t classes = table.front().size();
  std::vector<long> cluster_sizes(clusters, 0), class_sizes(classes, 0);
  for (std::size_t a = 0; a < clusters; ++a) {
    for (std::size_t b = 0; b < classes; ++b) {
      cluster_sizes[a] += table[a][b];
      class_sizes[b] += table[a][b];
    }
  }
  const double h_pred = entropy(cluster_sizes, n);
  const double h_true = entropy(class_sizes, n);
  if (h_pred == 0.0 || h_true == 0.0) {
    // Identical set partitions have a one-to-one contingency table.
    const bool identical = clusters == classes && [&] {
      for (const auto& row : table) {
        if (std::count_if(row.begin(), row.end(), [](long x) { return x > 0; }) != 1) {
          return false;
        }
      }
      return true;
    }();
    return identical ? 1.0 : 0.0;
  }
  double mutual = 0.0;
  for (std::size_t a = 0; a < clusters; ++a) {
    for (std::size_t b = 0; b < classes; ++b) {
      const double joint = static_cast<double>(table[a][b]);
      if (joint > 0.0) {
        mutual += (joint / n) * std::log(n * joint / (cluster_sizes[a] * static_cast<double>(class_sizes[b])));
      }
    }
  }
  return std::clamp(mutual / std::sqrt(h_pred * h_true), 0.0, 1.0);
}

double purity(LabelPair pair) {
  const auto table = contingency(pair);
  long total = 0;
  for (const auto& row : table) total += *std::max_element(row.begin(), row.end());
  return static_cast<double>(total) / static_cast<double>(pair.y_true.size());
}

}  // namespace lrcmcf
