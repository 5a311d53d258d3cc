#pragma once

#include "lrcmcf/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lrcmcf {

// M feature matrices (N x d_v each) describing the same N samples.
struct MultiViewDataset {
  std::string name;
  std::vector<Matrix> views;
  std::optional<std::vector<int>> labels;

  int size() const { return views.empty() ? 0 : static_cast<int>(views.front().rows()); }
  int view_count() const { return static_cast<int>(views.size()); }
  // Number of distinct ground-truth labels, 0 without labels.
  int class_count() const;
};

// Throws ValidationError on an empty dataset, mismatched row counts,
// non-finite features or a label vector of the wrong length.
void validate_dataset(const MultiViewDataset& data);

}  // namespace lrcmcf
