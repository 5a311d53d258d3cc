#include "lrcmcf/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace lrcmcf {

namespace fs = std::filesystem;
using nlohmann::json;

DatasetError::DatasetError(Kind kind, const std::string& what)
    : ValidationError(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

const char* to_string(DatasetError::Kind kind) {
  switch (kind) {
    case DatasetError::Kind::kMissingFile:
      return "missing file";
    case DatasetError::Kind::kRaggedRows:
      return "ragged rows";
    case DatasetError::Kind::kNonNumeric:
      return "non-numeric cell";
    case DatasetError::Kind::kRowCountMismatch:
      return "row-count mismatch";
    case DatasetError::Kind::kBadManifest:
      return "bad manifest";
  }
  return "dataset error";
}

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DatasetError(DatasetError::Kind::kMissingFile, "cannot open " + path.string());
  }
  return in;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

std::string location(const fs::path& path, std::size_t line, std::size_t column) {
  std::ostringstream out;
  out << path.string() << ":" << line << ", column " << column;
  return out.str();
}

fs::path resolve(const fs::path& base, const std::string& entry) {
  const fs::path p(entry);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

Matrix read_matrix_csv(const fs::path& path, char delimiter) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t column = 1;
    while (true) {
      const std::size_t end = line.find(delimiter, start);
      const std::string_view cell =
          std::string_view(line).substr(start, end == std::string::npos ? std::string::npos
                                                                        : end - start);
      double value = 0.0;
      if (!parse_number(cell, value)) {
        throw DatasetError(DatasetError::Kind::kNonNumeric,
                           location(path, line_no, column) + ": '" + std::string(trim(cell)) +
                               "'");
      }
      row.push_back(value);
      if (end == std::string::npos) break;
      start = end + 1;
      ++column;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DatasetError(DatasetError::Kind::kRaggedRows,
                         path.string() + ":" + std::to_string(line_no) + " has " +
                             std::to_string(row.size()) + " columns, expected " +
                             std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw DatasetError(DatasetError::Kind::kRaggedRows, path.string() + " contains no rows");
  }
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::vector<int> read_labels(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    int value = 0;
    if (!parse_number(line, value)) {
      throw DatasetError(DatasetError::Kind::kNonNumeric,
                         location(path, line_no, 1) + ": '" + std::string(trim(line)) +
                             "' is not an integer label");
    }
    labels.push_back(value);
  }
  return labels;
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in = open_input(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DatasetError(DatasetError::Kind::kBadManifest, path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  DatasetManifest manifest;
  try {
    manifest.name = doc.value("name", path.stem().string());
    for (const auto& entry : doc.at("views")) {
      manifest.views.push_back(resolve(base, entry.get<std::string>()));
    }
    if (doc.contains("labels") && !doc["labels"].is_null()) {
      manifest.labels = resolve(base, doc["labels"].get<std::string>());
    }
    const std::string delimiter = doc.value("delimiter", std::string(","));
    if (delimiter.size() != 1) throw DatasetError(DatasetError::Kind::kBadManifest,
                                                  path.string() + ": delimiter must be one character");
    manifest.delimiter = delimiter.front();
  } catch (const json::exception& e) {
    throw DatasetError(DatasetError::Kind::kBadManifest, path.string() + ": " + e.what());
  }
  if (manifest.views.empty()) {
    throw DatasetError(DatasetError::Kind::kBadManifest, path.string() + " lists no views");
  }
  return manifest;
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  json doc;
  doc["name"] = manifest.name;
  doc["views"] = json::array();
  for (const auto& view : manifest.views) doc["views"].push_back(view.generic_string());
  if (manifest.labels) doc["labels"] = manifest.labels->generic_string();
  doc["delimiter"] = std::string(1, manifest.delimiter);
  write_file_atomic(path, doc.dump(2) + "\n");
}

MultiViewDataset load_dataset(const fs::path& manifest_path) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  MultiViewDataset data;
  data.name = manifest.name;
  for (const auto& view_path : manifest.views) {
    data.views.push_back(read_matrix_csv(view_path, manifest.delimiter));
    if (data.views.back().rows() != data.views.front().rows()) {
      throw DatasetError(DatasetError::Kind::kRowCountMismatch,
                         manifest.views.front().string() + " has " +
                             std::to_string(data.views.front().rows()) + " rows but " +
                             view_path.string() + " has " +
                             std::to_string(data.views.back().rows()));
    }
  }
  if (manifest.labels) {
    data.labels = read_labels(*manifest.labels);
    if (static_cast<Eigen::Index>(data.labels->size()) != data.views.front().rows()) {
      throw DatasetError(DatasetError::Kind::kRowCountMismatch,
                         manifest.labels->string() + " has " +
                             std::to_string(data.labels->size()) + " labels but " +
                             manifest.views.front().string() + " has " +
                             std::to_string(data.views.front().rows()) + " rows");
    }
  }
  validate_dataset(data);
  return data;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_real(m(i, j));
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::string out;
  for (int label : labels) {
    out += std::to_string(label);
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_consensus_csv(const fs::path& path, const Matrix& s_star) {
  std::string out;
  for (Eigen::Index i = 0; i < s_star.rows(); ++i) {
    for (Eigen::Index j = 0; j < s_star.cols(); ++j) {
      if (s_star(i, j) == 0.0) continue;
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_real(s_star(i, j)) + '\n';
    }
  }
  write_file_atomic(path, out);
}

Matrix read_consensus_csv(const fs::path& path, int n) {
  const Matrix triplets = read_matrix_csv(path);
  if (triplets.cols() != 3) {
    throw DatasetError(DatasetError::Kind::kRaggedRows, path.string() + " must have 3 columns");
  }
  Matrix s = Matrix::Zero(n, n);
  for (Eigen::Index t = 0; t < triplets.rows(); ++t) {
    const auto i = static_cast<Eigen::Index>(triplets(t, 0));
    const auto j = static_cast<Eigen::Index>(triplets(t, 1));
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw ValidationError(path.string() + ": entry index outside the " + std::to_string(n) +
                            "x" + std::to_string(n) + " graph");
    }
    s(i, j) = triplets(t, 2);
  }
  return s;
}

void write_weights_csv(const fs::path& path, const Vector& weights) {
  std::string out;
  for (Eigen::Index v = 0; v < weights.size(); ++v) out += format_real(weights[v]) + '\n';
  write_file_atomic(path, out);
}

Vector read_weights_csv(const fs::path& path) {
  const Matrix column = read_matrix_csv(path);
  return column.col(0);
}

void write_trace_csv(const fs::path& path, const SolverTrace& trace) {
  std::string out = "iter,objective,fusion_residual,eig_sum,components,beta\n";
  for (const auto& record : trace.records) {
    out += std::to_string(record.iter) + ',' + format_real(record.objective) + ',' +
           format_real(record.fusion_residual) + ',' + format_real(record.eig_sum) + ',' +
           std::to_string(record.components) + ',' + format_real(record.beta) + '\n';
  }
  write_file_atomic(path, out);
}

MultiViewDataset generate_blobs(const BlobSpec& spec) {
  if (spec.n_per_cluster < 1 || spec.clusters < 1 || spec.views < 1) {
    throw ConfigError("blob sizes, cluster count and view count must be positive");
  }
  if (!(spec.noise >= 0.0)) throw ConfigError("noise must be nonnegative");
  const int dim = spec.clusters + 1;
  const int n = spec.n_per_cluster * spec.clusters;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  MultiViewDataset data;
  data.name = "blobs";
  data.labels = std::vector<int>(n);
  for (int i = 0; i < n; ++i) (*data.labels)[i] = i / spec.n_per_cluster;

  for (int v = 0; v < spec.views; ++v) {
    Eigen::MatrixXd g(dim, dim);
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) g(a, b) = gauss(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd rotation = qr.householderQ();
    const Eigen::VectorXd signs = qr.matrixQR().diagonal().cwiseSign();
    for (int a = 0; a < dim; ++a) rotation.col(a) *= signs[a] == 0.0 ? 1.0 : signs[a];

    Matrix latent = Matrix::Zero(n, dim);
    for (int i = 0; i < n; ++i) {
      latent(i, (*data.labels)[i]) = 1.0;
      for (int a = 0; a < dim; ++a) latent(i, a) += spec.noise * gauss(rng);
    }
    data.views.push_back(latent * rotation.transpose());
  }
  return data;
}

fs::path write_dataset(const MultiViewDataset& data, const fs::path& dir) {
  fs::create_directories(dir);
  DatasetManifest manifest;
  manifest.name = data.name;
  for (int v = 0; v < data.view_count(); ++v) {
    const std::string file = "view_" + std::to_string(v) + ".csv";
    write_matrix_csv(dir / file, data.views[v]);
    manifest.views.emplace_back(file);
  }
  if (data.labels) {
    write_labels(dir / "labels.csv", *data.labels);
    manifest.labels = "labels.csv";
  }
  const fs::path manifest_path = dir / "manifest.json";
  write_manifest(manifest_path, manifest);
  return manifest_path;
}

}  // namespace lrcmcf
