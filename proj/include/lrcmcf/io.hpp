#pragma once

#include "lrcmcf/dataset.hpp"
#include "lrcmcf/error.hpp"
#include "lrcmcf/linalg.hpp"
#include "lrcmcf/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lrcmcf {

// Data-file problems, each with its own kind so callers and tests can tell
// them apart. All map to the validation exit code.
class DatasetError : public ValidationError {
 public:
  enum class Kind { kMissingFile, kRaggedRows, kNonNumeric, kRowCountMismatch, kBadManifest };

  DatasetError(Kind kind, const std::string& what);
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(DatasetError::Kind kind);

// JSON manifest: {"name": ..., "views": [paths], "labels": path?, "delimiter": ","}.
// Relative paths resolve against the manifest's directory.
struct DatasetManifest {
  std::string name;
  std::vector<std::filesystem::path> views;
  std::optional<std::filesystem::path> labels;
  char delimiter = ',';
};

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

MultiViewDataset load_dataset(const std::filesystem::path& manifest_path);

// Headerless numeric CSV, one sample per row.
Matrix read_matrix_csv(const std::filesystem::path& path, char delimiter = ',');
std::vector<int> read_labels(const std::filesystem::path& path);

// Every writer goes through a temporary file and a rename, so readers never
// observe a half-written artifact.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Real numbers are printed with 12 significant digits.
std::string format_real(double value);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

// Consensus graph as "row,col,value" lines, nonzero entries only.
void write_consensus_csv(const std::filesystem::path& path, const Matrix& s_star);
Matrix read_consensus_csv(const std::filesystem::path& path, int n);

void write_weights_csv(const std::filesystem::path& path, const Vector& weights);
Vector read_weights_csv(const std::filesystem::path& path);

// Header "iter,objective,fusion_residual,eig_sum,components,beta".
void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace);

struct BlobSpec {
  int n_per_cluster = 100;
  int clusters = 3;
  int views = 3;
  double noise = 0.1;
  std::uint64_t seed = 0;
};

// Gaussian blobs around the scaled unit vectors e_1..e_c in c+1 latent
// dimensions; each view draws its own noise and applies its own random
// rotation. Samples are stored cluster by cluster.
MultiViewDataset generate_blobs(const BlobSpec& spec);

// Writes view_<v>.csv, labels.csv (when present) and manifest.json into
// `dir`; returns the manifest path.
std::filesystem::path write_dataset(const MultiViewDataset& data,
                                    const std::filesystem::path& dir);

}  // namespace lrcmcf
