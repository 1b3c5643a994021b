// Command-line front end: embed / features / stats / classify / plot /
// pipeline subcommands over a JSON config with flag overrides (flags win).
// Exit codes: 0 success, 1 validation error, 2 data error, 3 numeric failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stationplot/pipeline.hpp"

namespace {

using stationplot::PipelineConfig;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> data;  // LABEL=DIR pairs
  std::string format = "bonn";
  int column = 0;
  double sample_rate = 173.61;
  int order = 1;
  int dimension = 2;
  std::string detrend = "none";
  bool bandpass = false;
  double low_cut = 0.53;
  double high_cut = 40.0;
  int filter_order = 4;
  bool no_zero_phase = false;
  std::vector<std::string> features;
  std::vector<std::string> kernels;
  double C = 1.0;
  long runs = 100;
  double train_fraction = 0.7;
  bool no_stratify = false;
  std::uint64_t seed = 42;
  std::vector<std::string> problems;
  std::string output;
  int threads = 0;
  bool plot = false;
  std::string features_csv;

  std::map<std::string, CLI::Option*> handles;
  bool passed(const std::string& name) const {
    auto it = handles.find(name);
    return it != handles.end() && it->second->count() > 0;
  }
};

void add_common_options(CLI::App* cmd, CommonOpts& o, bool eval_opts) {
  auto& h = o.handles;
  h["config"] = cmd->add_option("-c,--config", o.config_path,
                                "JSON config file (flags override it)");
  h["data"] = cmd->add_option("--data", o.data,
                              "class data directory as LABEL=DIR (repeatable)");
  h["format"] = cmd->add_option("--format", o.format, "input format: bonn or csv");
  h["column"] = cmd->add_option("--column", o.column, "CSV column index (0-based)");
  h["sample-rate"] =
      cmd->add_option("--sample-rate", o.sample_rate, "sample rate for csv input, Hz");
  h["order"] = cmd->add_option("-n,--order", o.order, "differencing order n");
  h["dimension"] =
      cmd->add_option("-d,--dimension", o.dimension, "embedding dimension (2 or 3)");
  h["detrend"] =
      cmd->add_option("--detrend", o.detrend, "detrend mode: none, mean, linear");
  h["bandpass"] = cmd->add_flag("--bandpass", o.bandpass, "enable band-pass preprocessing");
  h["low-cut"] = cmd->add_option("--low-cut", o.low_cut, "band-pass low cutoff, Hz");
  h["high-cut"] = cmd->add_option("--high-cut", o.high_cut, "band-pass high cutoff, Hz");
  h["filter-order"] =
      cmd->add_option("--filter-order", o.filter_order, "band-pass filter order");
  h["no-zero-phase"] = cmd->add_flag("--no-zero-phase", o.no_zero_phase,
                                     "single-pass filtering instead of zero-phase");
  h["feature"] = cmd->add_option("--feature", o.features,
                                 "feature subset for stats/classification (repeatable)");
  h["threads"] = cmd->add_option("--threads", o.threads,
                                 "worker threads (0 = hardware concurrency)");
  h["output"] = cmd->add_option("-o,--output", o.output, "output directory");
  h["plot"] = cmd->add_flag("--plot", o.plot, "also emit SVG figures");
  h["problem"] = cmd->add_option(
      "--problem", o.problems, "problem shortcut: a-vs-e or abcd-vs-e (repeatable)");
  if (eval_opts) {
    h["kernel"] = cmd->add_option("--kernel", o.kernels,
                                  "kernel: linear, quadratic, polynomial, rbf "
                                  "(repeatable; default all four)");
    h["C"] = cmd->add_option("-C,--cost", o.C, "soft-margin penalty C");
    h["runs"] = cmd->add_option("--runs", o.runs, "evaluation repetitions");
    h["train-fraction"] =
        cmd->add_option("--train-fraction", o.train_fraction, "training split fraction");
    h["no-stratify"] =
        cmd->add_flag("--no-stratify", o.no_stratify, "plain random splits");
    h["seed"] = cmd->add_option("--seed", o.seed, "master RNG seed");
  }
}

PipelineConfig build_config(const CommonOpts& o) {
  PipelineConfig config;
  if (o.passed("config")) {
    config = stationplot::load_config(o.config_path);
  }
  if (o.passed("data")) {
    config.classes.clear();
    for (const auto& spec : o.data) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        throw stationplot::ValidationError("--data expects LABEL=DIR, got '" + spec +
                                           "'");
      }
      config.classes.push_back({spec.substr(0, eq), spec.substr(eq + 1)});
    }
  }
  if (o.passed("format")) config.format = o.format;
  if (o.passed("column")) config.csv_column = o.column;
  if (o.passed("sample-rate")) config.sample_rate = o.sample_rate;
  if (o.passed("order")) config.order = o.order;
  if (o.passed("dimension")) config.dimension = o.dimension;
  if (o.passed("detrend")) {
    if (o.detrend == "none") config.detrend = stationplot::DetrendMode::None;
    else if (o.detrend == "mean") config.detrend = stationplot::DetrendMode::Mean;
    else if (o.detrend == "linear") config.detrend = stationplot::DetrendMode::Linear;
    else
      throw stationplot::ValidationError("--detrend: unknown mode '" + o.detrend +
                                         "' (valid: none, mean, linear)");
  }
  if (o.passed("bandpass")) config.bandpass_enabled = o.bandpass;
  if (o.passed("low-cut")) config.bandpass.low_cut_hz = o.low_cut;
  if (o.passed("high-cut")) config.bandpass.high_cut_hz = o.high_cut;
  if (o.passed("filter-order")) config.bandpass.filter_order = o.filter_order;
  if (o.passed("no-zero-phase")) config.bandpass.zero_phase = !o.no_zero_phase;
  if (o.passed("feature")) config.feature_set = o.features;
  if (o.passed("kernel")) {
    config.kernels.clear();
    for (const auto& name : o.kernels) {
      config.kernels.push_back(stationplot::KernelSpec::parse(name));
    }
  }
  if (o.passed("C")) config.C = o.C;
  if (o.passed("runs")) config.runs = o.runs;
  if (o.passed("train-fraction")) config.train_fraction = o.train_fraction;
  if (o.passed("no-stratify")) config.stratify = !o.no_stratify;
  if (o.passed("seed")) config.seed = o.seed;
  if (o.passed("problem")) {
    config.problems.clear();
    for (const auto& name : o.problems) {
      config.problems.push_back(stationplot::standard_problem(name));
    }
  }
  if (o.passed("output")) config.output_dir = o.output;
  if (o.passed("threads")) config.threads = o.threads;
  if (o.passed("plot")) config.plot = o.plot;
  return config;
}

// One JSON object per diagnostic line keeps stderr script-friendly.
void emit_diagnostic(const std::string& level, const std::string& type,
                     const std::string& message) {
  nlohmann::ordered_json line{{"level", level}, {"type", type}, {"message", message}};
  std::cerr << line.dump() << "\n";
}

void flush_warnings(const stationplot::WarningSink& warnings) {
  for (const auto& w : warnings) {
    emit_diagnostic("warning", "runtime", w);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stationplot: difference-series embeddings, convex-hull shape "
               "features, and kernel-SVM evaluation for time series"};
  app.require_subcommand(1);

  CommonOpts embed_o, features_o, stats_o, classify_o, plot_o, pipeline_o;
  CLI::App* embed = app.add_subcommand("embed", "write point-cloud CSVs per record");
  add_common_options(embed, embed_o, false);
  CLI::App* features =
      app.add_subcommand("features", "extract the shape-feature matrix");
  add_common_options(features, features_o, false);
  CLI::App* stats =
      app.add_subcommand("stats", "rank features by group-difference p-values");
  add_common_options(stats, stats_o, false);
  stats_o.handles["features-csv"] = stats->add_option(
      "--features-csv", stats_o.features_csv, "existing feature matrix to analyze");
  CLI::App* classify =
      app.add_subcommand("classify", "run the repeated-split SVM evaluation");
  add_common_options(classify, classify_o, true);
  classify_o.handles["features-csv"] = classify->add_option(
      "--features-csv", classify_o.features_csv, "existing feature matrix to classify");
  CLI::App* plot = app.add_subcommand("plot", "render embedding and box-plot SVGs");
  add_common_options(plot, plot_o, false);
  CLI::App* pipeline =
      app.add_subcommand("pipeline", "embed + features + stats + classify");
  add_common_options(pipeline, pipeline_o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    std::cerr << e.what() << "\n";
    emit_diagnostic("error", "validation", e.what());
    return 1;
  }

  stationplot::WarningSink warnings;
  try {
    if (embed->parsed()) {
      stationplot::cmd_embed(build_config(embed_o), &warnings);
    } else if (features->parsed()) {
      stationplot::cmd_features(build_config(features_o), &warnings);
    } else if (stats->parsed()) {
      PipelineConfig config = build_config(stats_o);
      std::filesystem::path csv = stats_o.features_csv;
      if (csv.empty()) {
        csv = stationplot::cmd_features(config, &warnings);
      }
      stationplot::cmd_stats(config, csv, &warnings);
    } else if (classify->parsed()) {
      PipelineConfig config = build_config(classify_o);
      std::filesystem::path csv = classify_o.features_csv;
      if (csv.empty()) {
        csv = stationplot::cmd_features(config, &warnings);
      }
      stationplot::cmd_classify(config, csv, &warnings);
    } else if (plot->parsed()) {
      stationplot::cmd_plot(build_config(plot_o), &warnings);
    } else if (pipeline->parsed()) {
      stationplot::cmd_pipeline(build_config(pipeline_o), &warnings);
    }
  } catch (const stationplot::ValidationError& e) {
    flush_warnings(warnings);
    emit_diagnostic("error", "validation", e.what());
    return 1;
  } catch (const stationplot::NumericError& e) {
    flush_warnings(warnings);
    emit_diagnostic("error", "numeric", e.what());
    return 3;
  } catch (const stationplot::DataError& e) {
    flush_warnings(warnings);
    emit_diagnostic("error", "data", e.what());
    return 2;
  } catch (const std::exception& e) {
    flush_warnings(warnings);
    emit_diagnostic("error", "internal", e.what());
    return 3;
  }
  flush_warnings(warnings);
  return 0;
}
