#pragma once

#include "lrcmcf/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lrcmcf {

struct BaselineResult {
  std::vector<int> labels;
  std::string method_name;
};

// Spectral clustering on the column-wise concatenation of all (individually
// standardized) views: adaptive kNN affinity, bottom-c Laplacian
// eigenvectors, k-means on the row-normalized embedding.
BaselineResult spectral_concat(const MultiViewDataset& data, int c, int k,
                               std::uint64_t seed);

}  // namespace lrcmcf
