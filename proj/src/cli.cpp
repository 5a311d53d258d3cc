#include "lrcmcf/cli.hpp"

#include "lrcmcf/baseline.hpp"
#include "lrcmcf/clusters.hpp"
#include "lrcmcf/error.hpp"
#include "lrcmcf/io.hpp"
#include "lrcmcf/metrics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lrcmcf {

namespace fs = std::filesystem;
using nlohmann::json;

std::string lambda_to_string(const LambdaMode& mode) {
  switch (mode.kind) {
    case LambdaMode::Kind::kAuto:
      return "auto";
    case LambdaMode::Kind::kAutoPerRow:
      return "auto-row";
    case LambdaMode::Kind::kFixed:
      return format_real(mode.value);
  }
  return "auto";
}

LambdaMode parse_lambda(const std::string& text) {
  if (text == "auto") return LambdaMode::automatic();
  if (text == "auto-row") return LambdaMode::per_row();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0)) {
    throw ConfigError("--lambda expects auto, auto-row or a positive number, got '" + text + "'");
  }
  return LambdaMode::fixed(value);
}

namespace {

// Solver flags shared by `cluster` and `sweep-k`. Precedence: flag > config
// file > built-in default.
struct SolverFlags {
  SolverConfig values;
  std::string lambda = "auto";
  bool no_beta_adapt = false;
  std::string config_path;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void attach(CLI::App* app) {
    options = {
        {"k_neighbors", app->add_option("--k", values.k_neighbors, "Neighbours per sample (K)")},
        {"n_clusters", app->add_option("--clusters", values.n_clusters,
                                       "Cluster count c (default: number of label classes)")},
        {"lambda", app->add_option("--lambda", lambda, "auto | auto-row | <positive float>")},
        {"r", app->add_option("--r", values.r, "View-weight exponent r > 1")},
        {"beta_init", app->add_option("--beta", values.beta_init, "Initial rank-penalty weight")},
        {"beta_adaptive", app->add_flag("--no-beta-adapt", no_beta_adapt,
                                        "Keep beta fixed at its initial value")},
        {"max_iters", app->add_option("--max-iters", values.max_iters, "Outer iteration cap")},
        {"tol", app->add_option("--tol", values.tol, "Relative objective-change tolerance")},
        {"seed", app->add_option("--seed", values.seed, "Seed for the k-means fallback")},
        {"standardize", app->add_flag("--standardize,!--no-standardize", values.standardize,
                                      "Z-score each feature column before distances")},
    };
    app->add_option("--config", config_path, "JSON file with solver settings");
  }

  bool given(const std::string& key) const {
    for (const auto& [name, option] : options) {
      if (name == key) return option->count() > 0;
    }
    return false;
  }

  // Returns the resolved config; `clusters_known` tells whether c came from
  // a flag or the config file.
  SolverConfig resolve(bool& clusters_known) const {
    SolverConfig config;
    clusters_known = false;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot open config file " + config_path);
      json doc;
      try {
        doc = json::parse(in);
        if (doc.contains("k_neighbors")) config.k_neighbors = doc["k_neighbors"].get<int>();
        if (doc.contains("n_clusters")) {
          config.n_clusters = doc["n_clusters"].get<int>();
          clusters_known = true;
        }
        if (doc.contains("lambda")) {
          config.lambda = doc["lambda"].is_number()
                              ? LambdaMode::fixed(doc["lambda"].get<double>())
                              : parse_lambda(doc["lambda"].get<std::string>());
        }
        if (doc.contains("r")) config.r = doc["r"].get<double>();
        if (doc.contains("beta_init")) config.beta_init = doc["beta_init"].get<double>();
        if (doc.contains("beta_adaptive")) config.beta_adaptive = doc["beta_adaptive"].get<bool>();
        if (doc.contains("max_iters")) config.max_iters = doc["max_iters"].get<int>();
        if (doc.contains("tol")) config.tol = doc["tol"].get<double>();
        if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("standardize")) config.standardize = doc["standardize"].get<bool>();
      } catch (const json::exception& e) {
        throw ConfigError("config file " + config_path + ": " + e.what());
      }
    }
    if (given("k_neighbors")) config.k_neighbors = values.k_neighbors;
    if (given("n_clusters")) {
      config.n_clusters = values.n_clusters;
      clusters_known = true;
    }
    if (given("lambda")) config.lambda = parse_lambda(lambda);
    if (given("r")) config.r = values.r;
    if (given("beta_init")) config.beta_init = values.beta_init;
    if (given("beta_adaptive")) config.beta_adaptive = !no_beta_adapt;
    if (given("max_iters")) config.max_iters = values.max_iters;
    if (given("tol")) config.tol = values.tol;
    if (given("seed")) config.seed = values.seed;
    if (given("standardize")) config.standardize = values.standardize;
    return config;
  }
};

json config_to_json(const SolverConfig& config) {
  return {{"k_neighbors", config.k_neighbors},
          {"n_clusters", config.n_clusters},
          {"lambda", lambda_to_string(config.lambda)},
          {"r", config.r},
          {"beta_init", config.beta_init},
          {"beta_adaptive", config.beta_adaptive},
          {"max_iters", config.max_iters},
          {"tol", config.tol},
          {"seed", config.seed},
          {"standardize", config.standardize}};
}

SolverConfig finalize_config(const SolverFlags& flags, const MultiViewDataset& data) {
  bool clusters_known = false;
  SolverConfig config = flags.resolve(clusters_known);
  if (!clusters_known) {
    if (!data.labels) {
      throw ConfigError("--clusters is required when the dataset has no labels");
    }
    config.n_clusters = data.class_count();
  }
  return config;
}

struct Scores {
  double acc = 0.0;
  double nmi = 0.0;
  double pur = 0.0;
};

Scores score(const std::vector<int>& truth, const std::vector<int>& pred) {
  const LabelPair pair{truth, pred};
  return {accuracy(pair), nmi(pair), purity(pair)};
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

struct ClusterRun {
  FitResult fit;
  ClusteringResult clusters;
};

ClusterRun run_pipeline(const MultiViewDataset& data, const SolverConfig& config) {
  ClusterRun run;
  run.fit = fit(data, config);
  run.clusters = assign_clusters(run.fit.graph, config.n_clusters,
                                 default_component_eps(run.fit.graph.s_star), config.seed);
  return run;
}

int cmd_cluster(const std::string& manifest, const SolverFlags& flags, const fs::path& out_dir,
                int threads, std::ostream& out) {
  const MultiViewDataset data = load_dataset(manifest);
  const SolverConfig config = finalize_config(flags, data);
  set_threads(threads);
  const ClusterRun run = run_pipeline(data, config);

  fs::create_directories(out_dir);
  json snapshot = config_to_json(config);
  snapshot["command"] = "cluster";
  snapshot["manifest"] = manifest;
  write_file_atomic(out_dir / "config.json", snapshot.dump(2) + "\n");
  write_labels(out_dir / "labels.csv", run.clusters.labels);
  write_consensus_csv(out_dir / "consensus.csv", run.fit.graph.s_star);
  write_weights_csv(out_dir / "weights.csv", run.fit.weights.w);
  write_trace_csv(out_dir / "trace.csv", run.fit.trace);

  out << "dataset " << data.name << ": N=" << data.size() << " M=" << data.view_count()
      << " c=" << config.n_clusters << "\n"
      << "iterations " << run.fit.trace.iterations_run
      << (run.fit.trace.converged ? " (converged)" : " (not converged)") << ", method "
      << to_string(run.clusters.method) << ", components " << run.clusters.component_count
      << "\n";
  if (data.labels) {
    const Scores s = score(*data.labels, run.clusters.labels);
    json metrics = {{"acc", s.acc},
                    {"nmi", s.nmi},
                    {"pur", s.pur},
                    {"method", to_string(run.clusters.method)},
                    {"iterations", run.fit.trace.iterations_run},
                    {"converged", run.fit.trace.converged}};
    write_file_atomic(out_dir / "metrics.json", metrics.dump(2) + "\n");
    out << "ACC " << format_real(s.acc) << "  NMI " << format_real(s.nmi) << "  PUR "
        << format_real(s.pur) << "\n";
  }
  return 0;
}

int cmd_sweep_k(const std::string& manifest, const SolverFlags& flags,
                const std::vector<int>& k_list, const fs::path& out_dir, int threads,
                std::ostream& out, std::ostream& err) {
  const MultiViewDataset data = load_dataset(manifest);
  const SolverConfig base = finalize_config(flags, data);
  set_threads(threads);

  std::string table = "k,acc,nmi,pur,method,iterations,converged,status\n";
  for (int k : k_list) {
    SolverConfig config = base;
    config.k_neighbors = k;
    std::string row = std::to_string(k) + ',';
    try {
      const ClusterRun run = run_pipeline(data, config);
      if (data.labels) {
        const Scores s = score(*data.labels, run.clusters.labels);
        row += format_real(s.acc) + ',' + format_real(s.nmi) + ',' + format_real(s.pur) + ',';
      } else {
        row += ",,,";
      }
      row += std::string(to_string(run.clusters.method)) + ',' +
             std::to_string(run.fit.trace.iterations_run) + ',' +
             (run.fit.trace.converged ? "true" : "false") + ",ok";
    } catch (const Error& e) {
      err << "warning: K=" << k << " failed: " << e.what() << "\n";
      std::string reason = e.what();
      std::replace(reason.begin(), reason.end(), ',', ';');
      row += ",,,,,,failed: " + reason;
    }
    out << row << "\n";
    table += row + '\n';
  }
  fs::create_directories(out_dir);
  json snapshot = config_to_json(base);
  snapshot["command"] = "sweep-k";
  snapshot["manifest"] = manifest;
  snapshot["k_list"] = k_list;
  write_file_atomic(out_dir / "config.json", snapshot.dump(2) + "\n");
  write_file_atomic(out_dir / "sweep.csv", table);
  return 0;
}

int cmd_synth(const BlobSpec& spec, const fs::path& out_dir, std::ostream& out) {
  const MultiViewDataset data = generate_blobs(spec);
  const fs::path manifest = write_dataset(data, out_dir);
  out << manifest.string() << "\n";
  return 0;
}

int cmd_eval(const fs::path& truth_path, const fs::path& pred_path, const std::string& out_path,
             std::ostream& out) {
  const std::vector<int> truth = read_labels(truth_path);
  const std::vector<int> pred = read_labels(pred_path);
  const Scores s = score(truth, pred);
  const json metrics = {{"acc", s.acc}, {"nmi", s.nmi}, {"pur", s.pur}};
  if (!out_path.empty()) write_file_atomic(out_path, metrics.dump(2) + "\n");
  out << metrics.dump() << "\n";
  return 0;
}

int cmd_baseline(const std::string& manifest, int clusters, int k, std::uint64_t seed,
                 const fs::path& out_dir, std::ostream& out) {
  const MultiViewDataset data = load_dataset(manifest);
  if (clusters <= 0) {
    if (!data.labels) throw ConfigError("--clusters is required when the dataset has no labels");
    clusters = data.class_count();
  }
  const BaselineResult result = spectral_concat(data, clusters, k, seed);
  fs::create_directories(out_dir);
  write_labels(out_dir / "labels.csv", result.labels);
  out << result.method_name << ": N=" << data.size() << " c=" << clusters << "\n";
  if (data.labels) {
    const Scores s = score(*data.labels, result.labels);
    const json metrics = {{"acc", s.acc}, {"nmi", s.nmi}, {"pur", s.pur},
                          {"method", result.method_name}};
    write_file_atomic(out_dir / "metrics.json", metrics.dump(2) + "\n");
    out << "ACC " << format_real(s.acc) << "  NMI " << format_real(s.nmi) << "  PUR "
        << format_real(s.pur) << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-view clustering with locality-constrained consensus graphs", "lrcmcf"};
  app.require_subcommand(1);

  int threads = 0;
  std::string out_dir = "lrcmcf-out";

  std::string manifest;
  SolverFlags cluster_flags;
  auto* cluster = app.add_subcommand("cluster", "Fit the model and write run artifacts");
  cluster->add_option("manifest", manifest, "Dataset manifest (JSON)")->required();
  cluster_flags.attach(cluster);
  cluster->add_option("--out", out_dir, "Run directory");
  cluster->add_option("--threads", threads, "Worker threads (0 = runtime default)");

  SolverFlags sweep_flags;
  std::vector<int> k_list = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130};
  auto* sweep = app.add_subcommand("sweep-k", "Run the model for a list of K values");
  sweep->add_option("manifest", manifest, "Dataset manifest (JSON)")->required();
  sweep_flags.attach(sweep);
  sweep->add_option("--k-list", k_list, "Comma-separated K values")->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--threads", threads, "Worker threads (0 = runtime default)");

  BlobSpec blobs;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-view blob dataset");
  synth->add_option("--n-per-cluster", blobs.n_per_cluster, "Samples per cluster");
  synth->add_option("--clusters", blobs.clusters, "Number of clusters");
  synth->add_option("--views", blobs.views, "Number of views");
  synth->add_option("--noise", blobs.noise, "Noise standard deviation");
  synth->add_option("--seed", blobs.seed, "Random seed");
  synth->add_option("--out", out_dir, "Output directory");

  std::string truth_path, pred_path, metrics_out;
  auto* eval = app.add_subcommand("eval", "ACC/NMI/PUR of two label files");
  eval->add_option("--truth", truth_path, "Ground-truth labels")->required();
  eval->add_option("--pred", pred_path, "Predicted labels")->required();
  eval->add_option("--out", metrics_out, "Write the metrics JSON here");

  int baseline_clusters = 0;
  int baseline_k = 10;
  std::uint64_t baseline_seed = 0;
  auto* baseline = app.add_subcommand("baseline", "Spectral clustering on concatenated views");
  baseline->add_option("manifest", manifest, "Dataset manifest (JSON)")->required();
  baseline->add_option("--clusters", baseline_clusters, "Cluster count");
  baseline->add_option("--k", baseline_k, "Neighbours per sample");
  baseline->add_option("--seed", baseline_seed, "k-means seed");
  baseline->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kConfig);
  }

  try {
    if (*cluster) return cmd_cluster(manifest, cluster_flags, out_dir, threads, out);
    if (*sweep) return cmd_sweep_k(manifest, sweep_flags, k_list, out_dir, threads, out, err);
    if (*synth) return cmd_synth(blobs, out_dir, out);
    if (*eval) return cmd_eval(truth_path, pred_path, metrics_out, out);
    if (*baseline) {
      return cmd_baseline(manifest, baseline_clusters, baseline_k, baseline_seed, out_dir, out);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const fs::filesystem_error& e) {
    err << IoError(e.what()).what() << "\n";
    return static_cast<int>(ExitCode::kIo);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kInternal);
  }
  return static_cast<int>(ExitCode::kInternal);
}

}  // namespace lrcmcf
