#include "lrcmcf/dataset.hpp"

#include "lrcmcf/error.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace lrcmcf {

int MultiViewDataset::class_count() const {
  if (!labels) return 0;
  return static_cast<int>(std::set<int>(labels->begin(), labels->end()).size());
}

void validate_dataset(const MultiViewDataset& data) {
  if (data.views.empty()) throw ValidationError("dataset has no views");
  const auto n = data.views.front().rows();
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    const Matrix& view = data.views[v];
    if (view.rows() != n) {
      std::ostringstream msg;
      msg << "view " << v << " has " << view.rows() << " rows, view 0 has " << n;
      throw ValidationError(msg.str());
    }
    if (view.cols() < 1) throw ValidationError("view " + std::to_string(v) + " has no columns");
    for (Eigen::Index i = 0; i < view.rows(); ++i) {
      for (Eigen::Index j = 0; j < view.cols(); ++j) {
        if (!std::isfinite(view(i, j))) {
          std::ostringstream msg;
          msg << "view " << v << ": non-finite feature at row " << i << ", column " << j;
          throw ValidationError(msg.str());
        }
      }
    }
  }
  if (data.labels) {
    if (static_cast<Eigen::Index>(data.labels->size()) != n) {
      throw ValidationError("labels have " + std::to_string(data.labels->size()) +
                            " entries, views have " + std::to_string(n) + " rows");
    }
    for (int label : *data.labels) {
      if (label < 0) throw ValidationError("labels must be nonnegative integers");
    }
  }
}

}  // namespace lrcmcf
