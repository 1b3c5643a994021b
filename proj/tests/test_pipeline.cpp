#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stationplot/pipeline.hpp"

using namespace stationplot;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "missing file: " << p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

long line_count(const std::string& text) {
  long n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

struct TempTree {
  fs::path root;
  explicit TempTree(const std::string& tag) {
    root = fs::temp_directory_path() / ("stationplot_pipe_" + tag);
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~TempTree() { fs::remove_all(root); }
};

void write_record(const fs::path& path, const std::vector<int>& samples) {
  std::ofstream out(path, std::ios::binary);
  for (int v : samples) out << v << "\n";
}

// Two class directories: A holds random walks (a1..a5 plus one constant
// record), E holds white noise (e1..e6). 128 samples each.
void make_synthetic(const fs::path& root) {
  fs::create_directories(root / "dirA");
  fs::create_directories(root / "dirE");
  for (int f = 0; f < 5; ++f) {
    std::mt19937 rng(100 + f);
    std::vector<int> walk(128);
    int level = 0;
    for (auto& v : walk) {
      level += int(rng() % 7) - 3;
      v = level;
    }
    write_record(root / "dirA" / ("a" + std::to_string(f + 1) + ".txt"), walk);
  }
  write_record(root / "dirA" / "const.txt", std::vector<int>(128, 7));
  for (int f = 0; f < 6; ++f) {
    std::mt19937 rng(200 + f);
    std::vector<int> noise(128);
    for (auto& v : noise) v = int(rng() % 41) - 20;
    write_record(root / "dirE" / ("e" + std::to_string(f + 1) + ".txt"), noise);
  }
}

PipelineConfig synthetic_config(const fs::path& root) {
  PipelineConfig config;
  config.classes = {{"A", root / "dirA"}, {"E", root / "dirE"}};
  config.kernels = {KernelSpec::linear()};
  config.runs = 2;
  config.seed = 7;
  config.threads = 1;
  config.output_dir = root / "out";
  config.problems = {standard_problem("a-vs-e")};
  return config;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(STATIONPLOT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("standard problem shortcuts") {
  const ProblemSpec ae = standard_problem("a-vs-e");
  CHECK(ae.name == "a-vs-e");
  CHECK(ae.positive == std::vector<std::string>{"E"});
  CHECK(ae.negative == std::vector<std::string>{"A"});

  const ProblemSpec full = standard_problem("abcd-vs-e");
  CHECK(full.positive == std::vector<std::string>{"E"});
  CHECK(full.negative == std::vector<std::string>({"A", "B", "C", "D"}));

  CHECK_THROWS_WITH_AS(standard_problem("b-vs-e"), doctest::Contains("a-vs-e"),
                       ValidationError);
}

TEST_CASE("config JSON parsing covers defaults, overrides and typos") {
  const fs::path base = "/cfg";
  const PipelineConfig minimal =
      config_from_json(R"({"data": {"A": "dirA", "E": "dirE"}})", base);
  REQUIRE(minimal.classes.size() == 2);
  CHECK(minimal.classes[0].label == "A");
  CHECK(minimal.classes[0].directory == base / "dirA");
  CHECK(minimal.kernels.size() == 4);  // full default kernel battery
  CHECK(minimal.runs == 100);
  CHECK(minimal.order == 1);
  CHECK(minimal.seed == 42);

  const PipelineConfig rich = config_from_json(R"({
    "data": {"A": "dirA", "E": "dirE"},
    "order": 2,
    "dimension": 3,
    "detrend": "linear",
    "bandpass": {"enabled": true, "low_cut_hz": 1.0, "high_cut_hz": 30.0},
    "features": ["area", "volume"],
    "kernels": ["rbf", {"kind": "rbf", "sigma": 1.5}],
    "C": 2.5,
    "runs": 10,
    "train_fraction": 0.8,
    "seed": 99,
    "problems": ["a-vs-e", {"name": "x", "positive": ["E"], "negative": ["A"]}],
    "output_dir": "results",
    "threads": 2,
    "plot": true
  })", base);
  CHECK(rich.order == 2);
  CHECK(rich.dimension == 3);
  CHECK(rich.detrend == DetrendMode::Linear);
  CHECK(rich.bandpass_enabled);
  CHECK(rich.bandpass.low_cut_hz == 1.0);
  REQUIRE(rich.kernels.size() == 2);
  CHECK(rich.kernels[1].sigma == 1.5);
  CHECK(rich.C == 2.5);
  REQUIRE(rich.problems.size() == 2);
  CHECK(rich.problems[1].name == "x");
  CHECK(rich.output_dir == base / "results");
  CHECK(rich.plot);

  CHECK_THROWS_AS(config_from_json("{nope", base), DataError);
  CHECK_THROWS_AS(config_from_json("[1,2]", base), ValidationError);
  CHECK_THROWS_WITH_AS(
      config_from_json(R"({"data": {"A": "d"}, "bogus": 1})", base),
      doctest::Contains("bogus"), ValidationError);
  CHECK_THROWS_WITH_AS(config_from_json(R"({"order": 1})", base),
                       doctest::Contains("'data'"), ValidationError);
  CHECK_THROWS_WITH_AS(
      config_from_json(R"({"data": {"A": "d"}, "detrend": "quadratic"})", base),
      doctest::Contains("valid: none, mean, linear"), ValidationError);
  CHECK_THROWS_WITH_AS(
      config_from_json(R"({"data": {"A": "d"}, "kernels": ["sigmoid"]})", base),
      doctest::Contains("valid kinds"), ValidationError);
  CHECK_THROWS_WITH_AS(
      config_from_json(R"({"data": {"A": "d"}, "kernels": [{"kind": "rbf", "gamma": 3}]})",
                       base),
      doctest::Contains("gamma"), ValidationError);
  CHECK_THROWS_WITH_AS(
      config_from_json(R"({"data": {"A": "d"}, "problems": [{"name": "x", "positive": ["E"]}]})",
                       base),
      doctest::Contains("negative"), ValidationError);
  CHECK_THROWS_WITH_AS(config_from_json(R"({"data": {"A": "d"}, "runs": "ten"})", base),
                       doctest::Contains("runs"), ValidationError);
}

TEST_CASE("config validation rejects out-of-range fields with their names") {
  TempTree tmp("validate");
  make_synthetic(tmp.root);
  const PipelineConfig good = synthetic_config(tmp.root);
  CHECK_NOTHROW(validate_config(good));

  auto expect_error = [&](void (*mutate)(PipelineConfig&), const char* token) {
    PipelineConfig bad = good;
    mutate(bad);
    CHECK_THROWS_WITH_AS(validate_config(bad), doctest::Contains(token),
                         ValidationError);
  };
  expect_error([](PipelineConfig& c) { c.runs = 0; }, "runs");
  expect_error([](PipelineConfig& c) { c.train_fraction = 1.0; }, "train_fraction");
  expect_error([](PipelineConfig& c) { c.C = 0.0; }, "'C'");
  expect_error([](PipelineConfig& c) { c.dimension = 4; }, "dimension");
  expect_error([](PipelineConfig& c) { c.order = -1; }, "order");
  expect_error([](PipelineConfig& c) { c.format = "edf"; }, "format");
  expect_error([](PipelineConfig& c) { c.classes[0].label = "E"; }, "duplicate");
  expect_error([](PipelineConfig& c) { c.classes[0].directory = "/no/such/dir"; },
               "not a directory");
  expect_error([](PipelineConfig& c) { c.feature_set = {"volume"}; },
               "not available at dimension 2");
  expect_error([](PipelineConfig& c) { c.feature_set = {"area", "area"}; },
               "duplicate");
  expect_error(
      [](PipelineConfig& c) {
        c.bandpass_enabled = true;
        c.bandpass.high_cut_hz = 90.0;  // above Nyquist at the fixed 173.61 Hz
      },
      "bandpass");
  expect_error(
      [](PipelineConfig& c) { c.problems = {{"bad", {"Z"}, {"A"}}}; },
      "unknown class tag 'Z'");
  expect_error(
      [](PipelineConfig& c) { c.problems = {{"bad", {"A"}, {"A", "E"}}}; },
      "both sides");
}

TEST_CASE("feature-name selection respects dimension and order") {
  PipelineConfig config;
  config.dimension = 2;
  CHECK(selected_feature_names(config) ==
        std::vector<std::string>({"area", "perimeter", "circularity",
                                  "aspect_ratio"}));
  config.dimension = 3;
  CHECK(selected_feature_names(config).size() == 6);

  config.dimension = 2;
  config.feature_set = {"perimeter", "area"};
  CHECK(selected_feature_names(config) ==
        std::vector<std::string>({"perimeter", "area"}));
}

TEST_CASE("feature extraction excludes degenerate records via the sidecar") {
  TempTree tmp("features");
  make_synthetic(tmp.root);
  const PipelineConfig config = synthetic_config(tmp.root);

  WarningSink warnings;
  const fs::path csv_path = cmd_features(config, &warnings);
  CHECK(csv_path == tmp.root / "out" / "features" / "features.csv");

  const std::string csv = slurp(csv_path);
  const auto rows = parse_feature_csv(csv);
  REQUIRE(rows.size() == 11);  // 12 records minus the constant one
  CHECK(rows[0].label == "A");
  CHECK(rows[0].source_id == "a1.txt");
  CHECK(rows[10].label == "E");
  CHECK(rows[10].source_id == "e6.txt");
  for (const auto& row : rows) {
    CHECK(row.source_id != "const.txt");
    CHECK(row.area > 0.0);
    CHECK(row.order == 1);
  }

  const auto sidecar =
      nlohmann::json::parse(slurp(tmp.root / "out" / "features" / "exclusions.json"));
  REQUIRE(sidecar.size() == 1);
  CHECK(sidecar[0]["source_id"] == "const.txt");
  CHECK(sidecar[0]["label"] == "A");

  bool warned = false;
  for (const auto& w : warnings) {
    warned |= w.find("const.txt") != std::string::npos;
  }
  CHECK(warned);
}

TEST_CASE("feature output is byte-identical across reruns and thread counts") {
  TempTree tmp("rerun");
  make_synthetic(tmp.root);
  PipelineConfig config = synthetic_config(tmp.root);

  cmd_features(config);
  const std::string first = slurp(tmp.root / "out" / "features" / "features.csv");

  config.threads = 8;
  cmd_features(config);
  const std::string second = slurp(tmp.root / "out" / "features" / "features.csv");
  CHECK(first == second);
}

TEST_CASE("embeddings and figures land per record with the expected row count") {
  TempTree tmp("embed");
  make_synthetic(tmp.root);
  PipelineConfig config = synthetic_config(tmp.root);
  config.plot = true;

  cmd_embed(config);
  // 128 samples at order 1 drop two: header + 126 data rows.
  const std::string cloud = slurp(tmp.root / "out" / "embeddings" / "A_a1.txt.csv");
  CHECK(line_count(cloud) == 127);
  CHECK(cloud.rfind("x,y\n", 0) == 0);

  const std::string svg = slurp(tmp.root / "out" / "figures" / "E_e1.txt.svg");
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<polygon") != std::string::npos);

  // The constant record still embeds (all points coincide); only the hull
  // overlay is dropped.
  const std::string flat = slurp(tmp.root / "out" / "figures" / "A_const.txt.svg");
  CHECK(flat.find("<polygon") == std::string::npos);
}

TEST_CASE("problem materialization merges positive tags and filters the rest") {
  FeatureExtraction extraction;
  auto add = [&](const std::string& label, double area) {
    CHGFeatureVector row;
    row.label = label;
    row.area = area;
    row.perimeter = 2.0 * area;
    extraction.rows.push_back(row);
  };
  add("A", 1.0);
  add("B", 2.0);
  add("E", 3.0);
  add("Z", 4.0);  // not part of the problem
  add("D", 5.0);

  const ProblemSpec problem{"custom", {"E", "D"}, {"A", "B"}};
  const LabeledDataset dataset =
      materialize_problem(extraction, problem, {"area", "perimeter"});
  CHECK(dataset.positive_label == "E+D");
  REQUIRE(dataset.rows.rows() == 4);  // Z dropped
  CHECK(dataset.rows(0, 0) == 1.0);
  CHECK(dataset.rows(0, 1) == 2.0);
  CHECK(dataset.labels == std::vector<std::string>({"A", "B", "E+D", "E+D"}));
  CHECK(dataset.problem == "custom");

  const ProblemSpec mismatched{"none", {"Q"}, {"R"}};
  CHECK_THROWS_AS(materialize_problem(extraction, mismatched, {"area"}),
                  ValidationError);
}

TEST_CASE("the full pipeline writes stats and reports per problem") {
  TempTree tmp("full");
  make_synthetic(tmp.root);
  const PipelineConfig config = synthetic_config(tmp.root);

  cmd_pipeline(config);

  const std::string pvals = slurp(tmp.root / "out" / "stats" / "a-vs-e_pvalues.csv");
  CHECK(line_count(pvals) == 5);  // header + one row per 2D feature
  CHECK(pvals.rfind("feature,", 0) == 0);

  const auto report = nlohmann::json::parse(
      slurp(tmp.root / "out" / "reports" / "a-vs-e_report.json"));
  CHECK(report["problem"] == "a-vs-e");
  CHECK(report["positive_label"] == "E");
  REQUIRE(report["kernels"].size() == 1);
  CHECK(report["kernels"][0]["kernel"] == "linear");
  CHECK(report["kernels"][0]["runs_completed"].get<long>() +
            report["kernels"][0]["runs_excluded"].get<long>() ==
        2);

  const std::string table = slurp(tmp.root / "out" / "reports" / "a-vs-e_table.txt");
  CHECK(table.find("a-vs-e") != std::string::npos);
  CHECK(table.find("AC") != std::string::npos);

  // "runs all" includes the embed stage: point clouds land per record
  const std::string cloud = slurp(tmp.root / "out" / "embeddings" / "A_a1.txt.csv");
  CHECK(cloud.rfind("x,y", 0) == 0);
}

TEST_CASE("stats on a precomputed feature matrix honors --features-csv") {
  TempTree tmp("statscsv");
  make_synthetic(tmp.root);
  PipelineConfig config = synthetic_config(tmp.root);
  const fs::path csv = cmd_features(config);

  // Write stats into a fresh output tree fed only by the saved matrix.
  config.output_dir = tmp.root / "out2";
  cmd_stats(config, csv);
  CHECK(fs::exists(tmp.root / "out2" / "stats" / "a-vs-e_pvalues.json"));

  PipelineConfig no_problems = config;
  no_problems.problems.clear();
  CHECK_THROWS_AS(cmd_stats(no_problems, csv), ValidationError);
}

TEST_CASE("the command-line binary maps error classes to exit codes") {
  TempTree tmp("cli");
  make_synthetic(tmp.root);
  const std::string data_args = "--data A=" + (tmp.root / "dirA").string() +
                                " --data E=" + (tmp.root / "dirE").string();
  const std::string out = " -o " + (tmp.root / "cli_out").string();

  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("definitely-not-a-subcommand") == 1);

  // Config/usage problems exit 1.
  CHECK(run_cli("features --data A=/no/such/dir" + out) == 1);
  CHECK(run_cli("features " + data_args + " --order -3" + out) == 1);

  // Unreadable data exits 2.
  fs::create_directories(tmp.root / "corrupt");
  std::ofstream(tmp.root / "corrupt" / "bad.txt") << "not a number\n";
  CHECK(run_cli("features --data A=" + (tmp.root / "corrupt").string() + out) == 2);

  // A clean run exits 0 and writes the matrix.
  CHECK(run_cli("features " + data_args + " --threads 1" + out) == 0);
  CHECK(fs::exists(tmp.root / "cli_out" / "features" / "features.csv"));
}
