#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stationplot/bandpass.hpp"
#include "stationplot/embedding.hpp"
#include "stationplot/eval.hpp"
#include "stationplot/features.hpp"
#include "stationplot/types.hpp"

namespace stationplot {

struct ClassSpec {
  std::string label;
  std::filesystem::path directory;
};

// A two-class problem as a partition of class tags. Records whose label is
// in neither list are omitted from the problem's dataset.
struct ProblemSpec {
  std::string name;
  std::vector<std::string> positive;  // tags mapped to +1
  std::vector<std::string> negative;  // tags mapped to -1
};

// "a-vs-e" (positive E, negative A) or "abcd-vs-e" (positive E, negative
// A,B,C,D); anything else is a validation error listing the known names.
ProblemSpec standard_problem(const std::string& name);

struct PipelineConfig {
  std::vector<ClassSpec> classes;
  std::string format = "bonn";  // "bonn" or "csv"
  int csv_column = 0;
  double sample_rate = 173.61;  // used for csv input; bonn files fix their own

  int order = 1;
  int dimension = 2;
  DetrendMode detrend = DetrendMode::None;
  bool bandpass_enabled = false;
  BandpassSpec bandpass;

  // Subset of feature columns fed to stats/classification; empty = all
  // columns the embedding dimension provides.
  std::vector<std::string> feature_set;

  std::vector<KernelSpec> kernels;  // empty = linear, quadratic, poly3, rbf(2)
  double C = 1.0;
  long runs = 100;
  double train_fraction = 0.7;
  bool stratify = true;
  std::uint64_t seed = 42;

  std::vector<ProblemSpec> problems;
  std::filesystem::path output_dir = "out";
  int threads = 0;  // <= 0: hardware concurrency
  bool plot = false;
};

// Parses the JSON config file. Relative data/output paths are resolved
// against the config file's directory. Unknown keys are an error so typos
// fail loudly.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_json(const std::string& json_text,
                                const std::filesystem::path& base_dir);

// Field-level checks: paths exist, runs >= 1, 0 < train_fraction < 1,
// dimension in {2, 3}, order >= 0, kernel/bandpass parameter validity.
void validate_config(const PipelineConfig& config);

// ---- pipeline stages -------------------------------------------------------

std::vector<Signal> load_all_signals(const PipelineConfig& config,
                                     WarningSink* warnings = nullptr);

struct Exclusion {
  std::string source_id;
  std::string label;
  std::string reason;
};

struct FeatureExtraction {
  std::vector<CHGFeatureVector> rows;  // record order: class order, then file order
  std::vector<Exclusion> excluded;
};

// Per-record embed + hull + descriptors over a worker pool; records whose
// geometry degenerates (constant signals and the like) land in `excluded`
// instead of aborting the batch. Output order is independent of threading.
FeatureExtraction extract_features(const PipelineConfig& config,
                                   const std::vector<Signal>& signals);

// Rows restricted to the problem's tags, feature columns restricted to the
// configured set; positive tags relabeled for the +1 side.
LabeledDataset materialize_problem(const FeatureExtraction& extraction,
                                   const ProblemSpec& problem,
                                   const std::vector<std::string>& feature_names);

// Names of the feature columns the config selects (validated subset).
std::vector<std::string> selected_feature_names(const PipelineConfig& config);

// ---- subcommands -----------------------------------------------------------
// Each writes into a fixed directory layout under config.output_dir:
//   embeddings/  point-cloud CSVs          features/  feature matrix + sidecar
//   stats/       ranked p-value reports    reports/   evaluation JSON + tables
//   figures/     SVGs

void cmd_embed(const PipelineConfig& config, WarningSink* warnings = nullptr);
std::filesystem::path cmd_features(const PipelineConfig& config,
                                   WarningSink* warnings = nullptr);
void cmd_stats(const PipelineConfig& config, const std::filesystem::path& feature_csv,
               WarningSink* warnings = nullptr);
void cmd_classify(const PipelineConfig& config,
                  const std::filesystem::path& feature_csv,
                  WarningSink* warnings = nullptr);
void cmd_plot(const PipelineConfig& config, WarningSink* warnings = nullptr);
void cmd_pipeline(const PipelineConfig& config, WarningSink* warnings = nullptr);

}  // namespace stationplot
