#pragma once

#include <span>
#include <vector>

namespace lrcmcf {

// Ground truth and predicted ids for the same samples.
struct LabelPair {
  std::span<const int> y_true;
  std::span<const int> y_pred;
};

// Rows are predicted clusters, columns are true classes, both re-indexed
// densely in ascending id order.
std::vector<std::vector<long>> contingency(LabelPair pair);

// Fraction of samples matched under the best one-to-one cluster -> class map.
double accuracy(LabelPair pair);

// Mutual information over sqrt(H(truth) * H(pred)), natural logs.
double nmi(LabelPair pair);

double purity(LabelPair pair);

// Minimum-cost perfect assignment on a square cost matrix; returns the column
// assigned to each row.
std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost);

}  // namespace lrcmcf
