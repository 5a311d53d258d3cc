#pragma once

// Random instances and scratch-directory helpers shared by the tests.

#include "lrcmcf/linalg.hpp"
#include "lrcmcf/view_graph.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

namespace fixture {

using lrcmcf::Matrix;
using lrcmcf::Vector;

inline Matrix uniform_matrix(std::mt19937_64& rng, int rows, int cols, double lo = -1.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

// Squared distances of random points, so the matrix is a genuine one.
inline lrcmcf::DistanceMatrix random_distances(std::mt19937_64& rng, int n, int dims = 3) {
  return lrcmcf::pairwise_distances(uniform_matrix(rng, n, dims), false);
}

// Dense row-stochastic matrix with zero diagonal.
inline Matrix random_stochastic(std::mt19937_64& rng, int n) {
  Matrix s = uniform_matrix(rng, n, n, 0.0, 1.0);
  s.diagonal().setZero();
  for (int i = 0; i < n; ++i) s.row(i) /= s.row(i).sum();
  return s;
}

// A view affinity with random simplex rows on the kNN support of `d`.
inline lrcmcf::ViewAffinity random_view(std::mt19937_64& rng, const lrcmcf::DistanceMatrix& d,
                                        int k, int view_id = 0) {
  const lrcmcf::NeighborSets nbrs = lrcmcf::knn_sets(d, k);
  lrcmcf::ViewAffinity view =
      lrcmcf::init_view_affinity(d, nbrs, lrcmcf::LambdaMode::automatic(), view_id);
  view.weights = uniform_matrix(rng, d.size(), k, 0.0, 1.0);
  for (int i = 0; i < d.size(); ++i) view.weights.row(i) /= view.weights.row(i).sum();
  return view;
}

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("lrcmcf-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace fixture
