#include "lrcmcf/cli.hpp"
#include "lrcmcf/io.hpp"

#include "fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

using namespace lrcmcf;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "lrcmcf");
  std::ostringstream out, err;
  Outcome outcome;
  outcome.code = run_cli(args, out, err);
  outcome.out = out.str();
  outcome.err = err.str();
  return outcome;
}

std::string synth(const fixture::TempDir& dir, const std::string& name, int n, int c, int m,
                  const std::string& noise, const std::string& seed = "0") {
  const fs::path out = dir / name;
  const Outcome o = run({"synth", "--n-per-cluster", std::to_string(n), "--clusters",
                         std::to_string(c), "--views", std::to_string(m), "--noise", noise,
                         "--seed", seed, "--out", out.string()});
  REQUIRE(o.code == 0);
  return (out / "manifest.json").string();
}

}  // namespace

TEST_CASE("synth writes a manifest and is byte-reproducible") {
  fixture::TempDir dir("cli");
  const std::string a = synth(dir, "a", 100, 3, 3, "0.1");
  const std::string b = synth(dir, "b", 100, 3, 3, "0.1");
  const MultiViewDataset data = load_dataset(a);
  CHECK(data.size() == 300);
  CHECK(data.view_count() == 3);
  for (const std::string file : {"view_0.csv", "view_2.csv", "labels.csv"}) {
    CHECK(fixture::read_text(fs::path(a).parent_path() / file) ==
          fixture::read_text(fs::path(b).parent_path() / file));
  }
}

TEST_CASE("cluster writes every artifact and good metrics on blobs") {
  fixture::TempDir dir("cli");
  const std::string manifest = synth(dir, "data", 50, 3, 3, "0.1");
  const fs::path run_dir = dir / "run";
  const Outcome o = run({"cluster", manifest, "--k", "10", "--out", run_dir.string()});
  REQUIRE(o.code == 0);
  for (const std::string file :
       {"config.json", "labels.csv", "consensus.csv", "weights.csv", "trace.csv", "metrics.json"}) {
    CHECK_MESSAGE(fs::exists(run_dir / file), file);
  }
  const json metrics = json::parse(fixture::read_text(run_dir / "metrics.json"));
  CHECK(metrics["acc"].get<double>() >= 0.95);
  CHECK(metrics["nmi"].get<double>() >= 0.95);
  CHECK(metrics["pur"].get<double>() >= 0.95);
  CHECK(metrics.contains("method"));
  CHECK(metrics.contains("iterations"));
  CHECK(metrics.contains("converged"));

  const json config = json::parse(fixture::read_text(run_dir / "config.json"));
  CHECK(config["n_clusters"] == 3);
  CHECK(config["k_neighbors"] == 10);
  CHECK(config["lambda"] == "auto");

  CHECK(fixture::read_text(run_dir / "trace.csv").rfind("iter,objective,fusion_residual,eig_sum,components,beta\n", 0) == 0);
  CHECK(read_consensus_csv(run_dir / "consensus.csv", 150).rows() == 150);
  CHECK(std::abs(read_weights_csv(run_dir / "weights.csv").sum() - 1.0) < 1e-10);
}

TEST_CASE("reruns produce byte-identical labels") {
  fixture::TempDir dir("cli");
  const std::string manifest = synth(dir, "data", 30, 3, 2, "0.3", "4");
  REQUIRE(run({"cluster", manifest, "--seed", "7", "--out", (dir / "r1").string()}).code == 0);
  REQUIRE(run({"cluster", manifest, "--seed", "7", "--threads", "2", "--out", (dir / "r2").string()}).code == 0);
  CHECK(fixture::read_text(dir / "r1" / "labels.csv") == fixture::read_text(dir / "r2" / "labels.csv"));
  CHECK(fixture::read_text(dir / "r1" / "consensus.csv") ==
        fixture::read_text(dir / "r2" / "consensus.csv"));
}

TEST_CASE("noise-free blobs are clustered perfectly for any K") {
  fixture::TempDir dir("cli");
  const std::string manifest = synth(dir, "data", 20, 3, 2, "0");
  for (const std::string k : {"1", "5", "15"}) {
    const fs::path out = dir / ("k" + k);
    REQUIRE(run({"cluster", manifest, "--k", k, "--out", out.string()}).code == 0);
    const json metrics = json::parse(fixture::read_text(out / "metrics.json"));
    CHECK_MESSAGE(metrics["acc"].get<double>() == 1.0, "K=" << k);
  }
}

TEST_CASE("a dataset without labels gets no metrics file") {
  fixture::TempDir dir("cli");
  const MultiViewDataset data = generate_blobs({20, 2, 2, 0.1, 0});
  MultiViewDataset unlabeled = data;
  unlabeled.labels.reset();
  const fs::path manifest = write_dataset(unlabeled, dir / "data");

  CHECK(run({"cluster", manifest.string(), "--out", (dir / "no-c").string()}).code == 2);

  const fs::path run_dir = dir / "run";
  REQUIRE(run({"cluster", manifest.string(), "--clusters", "2", "--k", "5", "--out", run_dir.string()}).code == 0);
  CHECK(fs::exists(run_dir / "labels.csv"));
  CHECK(fs::exists(run_dir / "trace.csv"));
  CHECK_FALSE(fs::exists(run_dir / "metrics.json"));
}

TEST_CASE("flags override the config file, which overrides defaults") {
  fixture::TempDir dir("cli");
  const std::string manifest = synth(dir, "data", 20, 2, 2, "0.1");
  fixture::write_text(dir / "cfg.json", R"({"k_neighbors": 4, "r": 3.0, "lambda": 0.5, "max_iters": 7})");
  const fs::path run_dir = dir / "run";
  REQUIRE(run({"cluster", manifest, "--config", (dir / "cfg.json").string(), "--k", "6", "--out",
               run_dir.string()}).code == 0);
  const json config = json::parse(fixture::read_text(run_dir / "config.json"));
  CHECK(config["k_neighbors"] == 6);
  CHECK(config["r"] == 3.0);
  CHECK(config["lambda"] == "0.5");
  CHECK(config["max_iters"] == 7);
  CHECK(config["tol"] == 1e-6);
  CHECK(config["beta_adaptive"] == true);
}

TEST_CASE("sweep records per-K failures and keeps going") {
  fixture::TempDir dir("cli");
  const std::string manifest = synth(dir, "data", 10, 2, 2, "0.1");
  const fs::path out = dir / "sweep";
  const Outcome o = run({"sweep-k", manifest, "--k-list", "5,20,3", "--out", out.string()});
  CHECK(o.code == 0);
  CHECK(o.err.find("warning: K=20") != std::string::npos);
  const std::string table = fixture::read_text(out / "sweep.csv");
  std::istringstream lines(table);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "k,acc,nmi,pur,method,iterations,converged,status");
  CHECK(rows[1].rfind("5,", 0) == 0);
  CHECK(rows[1].substr(rows[1].size() - 3) == ",ok");
  CHECK(rows[2].rfind("20,", 0) == 0);
  CHECK(rows[2].find("failed: ") != std::string::npos);
  CHECK(rows[3].substr(rows[3].size() - 3) == ",ok");
}

TEST_CASE("sweep with a single K gives a single row") {
  fixture::TempDir dir("cli");
  const std::string manifest = synth(dir, "data", 15, 3, 2, "0.1");
  const fs::path out = dir / "sweep";
  REQUIRE(run({"sweep-k", manifest, "--k-list", "5", "--out", out.string()}).code == 0);
  const std::string table = fixture::read_text(out / "sweep.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 2);
}

TEST_CASE("eval and baseline commands") {
  fixture::TempDir dir("cli");
  fixture::write_text(dir / "t.csv", "0\n0\n1\n1\n");
  fixture::write_text(dir / "p.csv", "1\n1\n0\n0\n");
  const Outcome o = run({"eval", "--truth", (dir / "t.csv").string(), "--pred", (dir / "p.csv").string(),
                         "--out", (dir / "m.json").string()});
  CHECK(o.code == 0);
  const json metrics = json::parse(fixture::read_text(dir / "m.json"));
  CHECK(metrics["acc"] == 1.0);
  CHECK(metrics["pur"] == 1.0);

  fixture::write_text(dir / "short.csv", "0\n");
  CHECK(run({"eval", "--truth", (dir / "t.csv").string(), "--pred", (dir / "short.csv").string()}).code == 3);

  const std::string manifest = synth(dir, "data", 30, 3, 2, "0.1");
  const fs::path out = dir / "base";
  REQUIRE(run({"baseline", manifest, "--k", "8", "--out", out.string()}).code == 0);
  CHECK(fs::exists(out / "labels.csv"));
  const json base = json::parse(fixture::read_text(out / "metrics.json"));
  CHECK(base["method"] == "spectral_concat");
  CHECK(base["acc"].get<double>() >= 0.95);
}

TEST_CASE("every failure maps to its exit code") {
  fixture::TempDir dir("cli");
  const std::string manifest = synth(dir, "data", 10, 2, 2, "0.1");
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"cluster"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"cluster", manifest, "--k", "abc"}).code == 2);
  CHECK(run({"cluster", manifest, "--lambda", "-3", "--out", (dir / "x").string()}).code == 2);
  CHECK(run({"cluster", manifest, "--r", "1", "--out", (dir / "x").string()}).code == 2);
  CHECK(run({"cluster", manifest, "--k", "19", "--out", (dir / "x").string()}).code == 2);
  CHECK(run({"cluster", manifest, "--clusters", "50", "--k", "3", "--out", (dir / "x").string()}).code == 3);
  CHECK(run({"cluster", (dir / "missing.json").string()}).code == 3);
  CHECK(run({"cluster", manifest, "--config", (dir / "nope.json").string()}).code == 4);

  // An output path that is a regular file cannot become a run directory.
  fixture::write_text(dir / "blocker", "x");
  const Outcome blocked = run({"cluster", manifest, "--k", "5", "--out", (dir / "blocker").string()});
  CHECK(blocked.code == 4);
  CHECK_FALSE(blocked.err.empty());
}

TEST_CASE("lambda text round-trips") {
  CHECK(lambda_to_string(parse_lambda("auto")) == "auto");
  CHECK(lambda_to_string(parse_lambda("auto-row")) == "auto-row");
  CHECK(parse_lambda("0.25").value == 0.25);
  CHECK(lambda_to_string(LambdaMode::fixed(0.25)) == "0.25");
  CHECK_THROWS_AS(parse_lambda("zero"), ConfigError);
  CHECK_THROWS_AS(parse_lambda("0"), ConfigError);
}
