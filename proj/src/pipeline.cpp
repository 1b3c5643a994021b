#include "stationplot/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stationplot/io.hpp"
#include "stationplot/parallel.hpp"
#include "stationplot/stats.hpp"
#include "stationplot/svg.hpp"

namespace stationplot {
namespace {

using Json = nlohmann::ordered_json;

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open for writing: " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw DataError("write failure: " + path.string());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DetrendMode parse_detrend(const std::string& name) {
  if (name == "none") return DetrendMode::None;
  if (name == "mean") return DetrendMode::Mean;
  if (name == "linear") return DetrendMode::Linear;
  throw ValidationError("config field 'detrend': unknown mode '" + name +
                        "' (valid: none, mean, linear)");
}

KernelSpec kernel_from_json(const Json& j) {
  if (j.is_string()) {
    return KernelSpec::parse(j.get<std::string>());
  }
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError("config field 'kernels': entries must be a kernel "
                          "name or an object with a 'kind'");
  }
  KernelSpec spec = KernelSpec::parse(j.at("kind").get<std::string>());
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    if (key == "degree") spec.degree = value.get<int>();
    else if (key == "coef0") spec.coef0 = value.get<double>();
    else if (key == "sigma") spec.sigma = value.get<double>();
    else throw ValidationError("config field 'kernels': unknown key '" + key + "'");
  }
  spec.validate();
  return spec;
}

ProblemSpec problem_from_json(const Json& j) {
  if (j.is_string()) {
    return standard_problem(j.get<std::string>());
  }
  if (!j.is_object()) {
    throw ValidationError("config field 'problems': entries must be a problem "
                          "name or an object with name/positive/negative");
  }
  ProblemSpec p;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") p.name = value.get<std::string>();
    else if (key == "positive") p.positive = value.get<std::vector<std::string>>();
    else if (key == "negative") p.negative = value.get<std::vector<std::string>>();
    else throw ValidationError("config field 'problems': unknown key '" + key + "'");
  }
  if (p.name.empty() || p.positive.empty() || p.negative.empty()) {
    throw ValidationError(
        "config field 'problems': custom problems need name, positive, negative");
  }
  return p;
}

// Effective sampling rate of the configured input format.
double effective_rate(const PipelineConfig& config) {
  return config.format == "bonn" ? kBonnSampleRateHz : config.sample_rate;
}

bool uses_3d(const std::vector<CHGFeatureVector>& rows) {
  return !rows.empty() && rows[0].volume.has_value();
}

double feature_value(const CHGFeatureVector& row, const std::string& name) {
  if (name == "area") return row.area;
  if (name == "perimeter") return row.perimeter;
  if (name == "circularity") return row.circularity;
  if (name == "aspect_ratio") return row.aspect_ratio;
  if (name == "volume" || name == "surface_area") {
    const auto& v = (name == "volume") ? row.volume : row.surface_area;
    if (!v.has_value()) {
      throw DataError("feature '" + name + "' requested from a 2D feature matrix");
    }
    return *v;
  }
  throw ValidationError("unknown feature name '" + name + "'");
}

std::string joined_positive_tag(const ProblemSpec& problem) {
  std::string tag;
  for (const auto& t : problem.positive) {
    if (!tag.empty()) tag += '+';
    tag += t;
  }
  return tag;
}

// Filename-safe record stem: class tag prefix keeps records unique when the
// same file name appears under several class directories.
std::string record_stem(const Signal& sig) {
  return sig.label + "_" + sig.source_id;
}

std::filesystem::path features_csv_path(const PipelineConfig& config) {
  return config.output_dir / "features" / "features.csv";
}

Signal preprocess(const PipelineConfig& config, const Signal& raw) {
  return config.bandpass_enabled ? bandpass(raw, config.bandpass) : raw;
}

EmbeddingConfig embedding_config(const PipelineConfig& config) {
  EmbeddingConfig ec;
  ec.base_order = config.order;
  ec.dimension = config.dimension;
  ec.detrend_mode = config.detrend;
  return ec;
}

std::vector<CHGFeatureVector> load_feature_rows(const PipelineConfig& config,
                                                const std::filesystem::path& csv) {
  const std::filesystem::path path = csv.empty() ? features_csv_path(config) : csv;
  return parse_feature_csv(read_text_file(path));
}

ExperimentOptions experiment_options(const PipelineConfig& config) {
  ExperimentOptions opt;
  opt.kernels = config.kernels;
  opt.C = config.C;
  opt.runs = config.runs;
  opt.train_fraction = config.train_fraction;
  opt.seed = config.seed;
  opt.stratify = config.stratify;
  opt.threads = config.threads;
  return opt;
}

// Class tags participating in a problem, in (negative..., positive...) order
// so paired plots read baseline-then-condition left to right.
std::vector<std::string> problem_tag_order(const ProblemSpec& problem) {
  std::vector<std::string> tags = problem.negative;
  tags.insert(tags.end(), problem.positive.begin(), problem.positive.end());
  return tags;
}

void write_problem_stats(const PipelineConfig& config, const ProblemSpec& problem,
                         const std::vector<CHGFeatureVector>& rows,
                         const std::vector<std::string>& names) {
  // Restrict rows to the problem's tags, keep original class tags as groups.
  std::vector<const CHGFeatureVector*> selected;
  const auto tags = problem_tag_order(problem);
  for (const auto& row : rows) {
    if (std::find(tags.begin(), tags.end(), row.label) != tags.end()) {
      selected.push_back(&row);
    }
  }
  if (selected.empty()) {
    throw ValidationError("problem '" + problem.name +
                          "': no feature rows match its class tags");
  }
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(selected.size()),
                         static_cast<Eigen::Index>(names.size()));
  std::vector<std::string> labels(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    labels[i] = selected[i]->label;
    for (std::size_t c = 0; c < names.size(); ++c) {
      matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          feature_value(*selected[i], names[c]);
    }
  }
  const auto ranked = rank_features(matrix, labels, names);
  write_text_file(config.output_dir / "stats" / (problem.name + "_pvalues.csv"),
                  ranked_features_csv(ranked));
  write_text_file(config.output_dir / "stats" / (problem.name + "_pvalues.json"),
                  ranked_features_json(ranked));

  if (config.plot) {
    PlotStyle style;
    for (std::size_t c = 0; c < names.size(); ++c) {
      std::vector<std::pair<std::string, BoxplotSummary>> summaries;
      for (const auto& tag : tags) {
        std::vector<double> values;
        for (std::size_t i = 0; i < selected.size(); ++i) {
          if (labels[i] == tag) {
            values.push_back(matrix(static_cast<Eigen::Index>(i),
                                    static_cast<Eigen::Index>(c)));
          }
        }
        if (values.empty()) continue;
        Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(
            values.data(), static_cast<Eigen::Index>(values.size()));
        summaries.emplace_back(tag, boxplot_summary(v));
      }
      write_text_file(config.output_dir / "figures" /
                          (problem.name + "_" + names[c] + "_boxplot.svg"),
                      render_boxplot(summaries, style, names[c]));
    }
  }
}

void write_problem_report(const PipelineConfig& config, const ProblemSpec& problem,
                          const std::vector<CHGFeatureVector>& rows,
                          const std::vector<std::string>& names,
                          WarningSink* warnings) {
  FeatureExtraction extraction;
  extraction.rows = rows;
  const LabeledDataset dataset = materialize_problem(extraction, problem, names);
  const EvalReport report = run_experiment(dataset, experiment_options(config));
  for (const auto& w : report.warnings) {
    warn(warnings, "problem '" + problem.name + "': " + w);
  }
  write_text_file(config.output_dir / "reports" / (problem.name + "_report.json"),
                  report_to_json(report));
  write_text_file(config.output_dir / "reports" / (problem.name + "_table.txt"),
                  report_to_table(report));
}

}  // namespace

ProblemSpec standard_problem(const std::string& name) {
  if (name == "a-vs-e") {
    return ProblemSpec{"a-vs-e", {"E"}, {"A"}};
  }
  if (name == "abcd-vs-e") {
    return ProblemSpec{"abcd-vs-e", {"E"}, {"A", "B", "C", "D"}};
  }
  throw ValidationError("unknown problem '" + name +
                        "' (valid shortcuts: a-vs-e, abcd-vs-e)");
}

PipelineConfig config_from_json(const std::string& json_text,
                                const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ValidationError("config: top level must be a JSON object");
  }

  PipelineConfig config;
  bool have_data = false;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "data") {
        if (!value.is_object() || value.empty()) {
          throw ValidationError("must be a non-empty object of class tag -> directory");
        }
        for (const auto& [label, dir] : value.items()) {
          config.classes.push_back(
              {label, base_dir / std::filesystem::path(dir.get<std::string>())});
        }
        have_data = true;
      } else if (key == "format") {
        config.format = value.get<std::string>();
      } else if (key == "csv_column") {
        config.csv_column = value.get<int>();
      } else if (key == "sample_rate") {
        config.sample_rate = value.get<double>();
      } else if (key == "order") {
        config.order = value.get<int>();
      } else if (key == "dimension") {
        config.dimension = value.get<int>();
      } else if (key == "detrend") {
        config.detrend = parse_detrend(value.get<std::string>());
      } else if (key == "bandpass") {
        for (const auto& [bk, bv] : value.items()) {
          if (bk == "enabled") config.bandpass_enabled = bv.get<bool>();
          else if (bk == "low_cut_hz") config.bandpass.low_cut_hz = bv.get<double>();
          else if (bk == "high_cut_hz") config.bandpass.high_cut_hz = bv.get<double>();
          else if (bk == "filter_order") config.bandpass.filter_order = bv.get<int>();
          else if (bk == "zero_phase") config.bandpass.zero_phase = bv.get<bool>();
          else throw ValidationError("unknown key '" + bk + "'");
        }
      } else if (key == "features") {
        config.feature_set = value.get<std::vector<std::string>>();
      } else if (key == "kernels") {
        for (const auto& k : value) {
          config.kernels.push_back(kernel_from_json(k));
        }
      } else if (key == "C") {
        config.C = value.get<double>();
      } else if (key == "runs") {
        config.runs = value.get<long>();
      } else if (key == "train_fraction") {
        config.train_fraction = value.get<double>();
      } else if (key == "stratify") {
        config.stratify = value.get<bool>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "problems") {
        for (const auto& p : value) {
          config.problems.push_back(problem_from_json(p));
        }
      } else if (key == "output_dir") {
        config.output_dir = base_dir / std::filesystem::path(value.get<std::string>());
      } else if (key == "threads") {
        config.threads = value.get<int>();
      } else if (key == "plot") {
        config.plot = value.get<bool>();
      } else {
        throw ValidationError("unknown field");
      }
    } catch (const Json::exception& e) {
      throw ValidationError("config field '" + key + "': " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("config field '" + key + "': " + e.what());
    }
  }
  if (!have_data) {
    throw ValidationError("config field 'data': required");
  }
  if (config.kernels.empty()) {
    config.kernels = {KernelSpec::linear(), KernelSpec::quadratic(),
                      KernelSpec::polynomial(), KernelSpec::rbf()};
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  PipelineConfig config =
      config_from_json(read_text_file(path), path.parent_path());
  return config;
}

void validate_config(const PipelineConfig& config) {
  if (config.classes.empty()) {
    throw ValidationError("config field 'data': at least one class is required");
  }
  std::set<std::string> seen;
  for (const auto& cls : config.classes) {
    if (cls.label.empty()) {
      throw ValidationError("config field 'data': empty class tag");
    }
    if (!seen.insert(cls.label).second) {
      throw ValidationError("config field 'data': duplicate class tag '" +
                            cls.label + "'");
    }
    if (!std::filesystem::is_directory(cls.directory)) {
      throw ValidationError("config field 'data': not a directory: " +
                            cls.directory.string());
    }
  }
  if (config.format != "bonn" && config.format != "csv") {
    throw ValidationError("config field 'format': must be 'bonn' or 'csv'");
  }
  if (config.csv_column < 0) {
    throw ValidationError("config field 'csv_column': must be >= 0");
  }
  if (!(config.sample_rate > 0.0)) {
    throw ValidationError("config field 'sample_rate': must be positive");
  }
  if (config.order < 0) {
    throw ValidationError("config field 'order': must be >= 0");
  }
  if (config.dimension != 2 && config.dimension != 3) {
    throw ValidationError("config field 'dimension': must be 2 or 3");
  }
  if (!(config.C > 0.0)) {
    throw ValidationError("config field 'C': must be positive");
  }
  if (config.runs < 1) {
    throw ValidationError("config field 'runs': must be >= 1");
  }
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw ValidationError("config field 'train_fraction': must be in (0, 1)");
  }
  for (const auto& kernel : config.kernels) {
    kernel.validate();
  }
  if (config.bandpass_enabled) {
    const double rate = effective_rate(config);
    const auto& bp = config.bandpass;
    if (bp.filter_order < 1) {
      throw ValidationError("config field 'bandpass.filter_order': must be >= 1");
    }
    if (!(0.0 < bp.low_cut_hz && bp.low_cut_hz < bp.high_cut_hz &&
          bp.high_cut_hz < rate / 2.0)) {
      throw ValidationError(
          "config field 'bandpass': cutoffs must satisfy 0 < low < high < rate/2");
    }
  }
  selected_feature_names(config);  // validates the feature subset
  for (const auto& problem : config.problems) {
    for (const auto& tag : problem_tag_order(problem)) {
      if (!seen.count(tag)) {
        throw ValidationError("config field 'problems': problem '" + problem.name +
                              "' references unknown class tag '" + tag + "'");
      }
    }
    for (const auto& tag : problem.positive) {
      if (std::find(problem.negative.begin(), problem.negative.end(), tag) !=
          problem.negative.end()) {
        throw ValidationError("config field 'problems': problem '" + problem.name +
                              "' lists tag '" + tag + "' on both sides");
      }
    }
  }
}

std::vector<std::string> selected_feature_names(const PipelineConfig& config) {
  std::vector<std::string> all;
  if (config.dimension == 2) {
    all.assign(std::begin(kFeatureNames2D), std::end(kFeatureNames2D));
  } else {
    all.assign(std::begin(kFeatureNames3D), std::end(kFeatureNames3D));
  }
  if (config.feature_set.empty()) {
    return all;
  }
  std::vector<std::string> names;
  for (const auto& name : config.feature_set) {
    if (std::find(all.begin(), all.end(), name) == all.end()) {
      throw ValidationError("config field 'features': '" + name +
                            "' is not available at dimension " +
                            std::to_string(config.dimension));
    }
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      throw ValidationError("config field 'features': duplicate '" + name + "'");
    }
    names.push_back(name);
  }
  return names;
}

std::vector<Signal> load_all_signals(const PipelineConfig& config,
                                     WarningSink* warnings) {
  std::vector<Signal> signals;
  for (const auto& cls : config.classes) {
    std::vector<Signal> set =
        config.format == "bonn"
            ? load_set(cls.directory, cls.label, warnings)
            : load_set_csv(cls.directory, cls.label, config.csv_column,
                           config.sample_rate);
    signals.insert(signals.end(), std::make_move_iterator(set.begin()),
                   std::make_move_iterator(set.end()));
  }
  return signals;
}

FeatureExtraction extract_features(const PipelineConfig& config,
                                   const std::vector<Signal>& signals) {
  const EmbeddingConfig ec = embedding_config(config);
  const long count = static_cast<long>(signals.size());
  std::vector<CHGFeatureVector> slots(signals.size());
  std::vector<std::string> failure(signals.size());

  parallel_for(count, config.threads, [&](long i) {
    const Signal& sig = signals[static_cast<std::size_t>(i)];
    try {
      const Signal pre = preprocess(config, sig);
      CHGFeatureVector row = chg_features(stationplot(pre, ec));
      row.source_id = sig.source_id;
      row.label = sig.label;
      row.order = config.order;
      if (row.aspect_degenerate) {
        failure[static_cast<std::size_t>(i)] = "degenerate aspect ratio";
      } else {
        slots[static_cast<std::size_t>(i)] = std::move(row);
      }
    } catch (const DegenerateGeometryError& e) {
      failure[static_cast<std::size_t>(i)] = e.what();
    }
  });

  FeatureExtraction result;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (failure[i].empty()) {
      result.rows.push_back(std::move(slots[i]));
    } else {
      result.excluded.push_back(
          {signals[i].source_id, signals[i].label, failure[i]});
    }
  }
  return result;
}

LabeledDataset materialize_problem(const FeatureExtraction& extraction,
                                   const ProblemSpec& problem,
                                   const std::vector<std::string>& feature_names) {
  const std::string positive_tag = joined_positive_tag(problem);
  std::vector<const CHGFeatureVector*> selected;
  std::vector<std::string> labels;
  for (const auto& row : extraction.rows) {
    const bool is_pos = std::find(problem.positive.begin(), problem.positive.end(),
                                  row.label) != problem.positive.end();
    const bool is_neg = std::find(problem.negative.begin(), problem.negative.end(),
                                  row.label) != problem.negative.end();
    if (!is_pos && !is_neg) {
      continue;
    }
    selected.push_back(&row);
    // Positive tags merge into one stratum; negatives keep their own tags so
    // stratified splits balance each of them individually.
    labels.push_back(is_pos ? positive_tag : row.label);
  }
  if (selected.empty()) {
    throw ValidationError("problem '" + problem.name +
                          "': no feature rows match its class tags");
  }

  LabeledDataset dataset;
  dataset.rows.resize(static_cast<Eigen::Index>(selected.size()),
                      static_cast<Eigen::Index>(feature_names.size()));
  for (std::size_t i = 0; i < selected.size(); ++i) {
    for (std::size_t c = 0; c < feature_names.size(); ++c) {
      dataset.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          feature_value(*selected[i], feature_names[c]);
    }
  }
  dataset.labels = std::move(labels);
  dataset.positive_label = positive_tag;
  dataset.problem = problem.name;
  return dataset;
}

namespace {

// Shared by cmd_embed and cmd_pipeline: per-record point-cloud CSVs under
// embeddings/, plus hull-overlay SVGs under figures/ when plotting.
void write_embeddings(const PipelineConfig& config,
                      const std::vector<Signal>& signals) {
  const EmbeddingConfig ec = embedding_config(config);
  const long count = static_cast<long>(signals.size());
  std::vector<std::string> csvs(signals.size());
  std::vector<std::string> svgs(config.plot ? signals.size() : 0);
  parallel_for(count, config.threads, [&](long i) {
    const Signal& sig = signals[static_cast<std::size_t>(i)];
    const PointCloud cloud = stationplot(preprocess(config, sig), ec);
    csvs[static_cast<std::size_t>(i)] = point_cloud_csv(cloud);
    if (config.plot) {
      PlotStyle style;
      std::string svg;
      try {
        const ConvexHull2D hull = quickhull2d(cloud.points.leftCols(2));
        svg = render_stationplot(cloud, &hull, style, sig.label);
      } catch (const DegenerateGeometryError&) {
        svg = render_stationplot(cloud, nullptr, style, sig.label);
      }
      svgs[static_cast<std::size_t>(i)] = std::move(svg);
    }
  });
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const std::string stem = record_stem(signals[i]);
    write_text_file(config.output_dir / "embeddings" / (stem + ".csv"), csvs[i]);
    if (config.plot) {
      write_text_file(config.output_dir / "figures" / (stem + ".svg"), svgs[i]);
    }
  }
}

}  // namespace

void cmd_embed(const PipelineConfig& config, WarningSink* warnings) {
  validate_config(config);
  const std::vector<Signal> signals = load_all_signals(config, warnings);
  write_embeddings(config, signals);
}

std::filesystem::path cmd_features(const PipelineConfig& config,
                                   WarningSink* warnings) {
  validate_config(config);
  const std::vector<Signal> signals = load_all_signals(config, warnings);
  const FeatureExtraction extraction = extract_features(config, signals);

  const std::filesystem::path csv_path = features_csv_path(config);
  write_text_file(csv_path, feature_csv(extraction.rows, config.dimension == 3));

  Json sidecar = Json::array();
  for (const auto& ex : extraction.excluded) {
    sidecar.push_back(Json{{"source_id", ex.source_id},
                           {"label", ex.label},
                           {"reason", ex.reason}});
    warn(warnings, "excluded " + ex.label + "/" + ex.source_id + ": " + ex.reason);
  }
  write_text_file(config.output_dir / "features" / "exclusions.json",
                  sidecar.dump(2) + "\n");
  return csv_path;
}

void cmd_stats(const PipelineConfig& config, const std::filesystem::path& feature_csv,
               WarningSink* warnings) {
  validate_config(config);
  if (config.problems.empty()) {
    throw ValidationError("stats: no problems configured (set 'problems' or --problem)");
  }
  const auto rows = load_feature_rows(config, feature_csv);
  const auto names = selected_feature_names(config);
  if (uses_3d(rows) != (config.dimension == 3)) {
    warn(warnings, "feature matrix dimensionality differs from configured dimension");
  }
  for (const auto& problem : config.problems) {
    write_problem_stats(config, problem, rows, names);
  }
}

void cmd_classify(const PipelineConfig& config,
                  const std::filesystem::path& feature_csv, WarningSink* warnings) {
  validate_config(config);
  if (config.problems.empty()) {
    throw ValidationError(
        "classify: no problems configured (set 'problems' or --problem)");
  }
  const auto rows = load_feature_rows(config, feature_csv);
  const auto names = selected_feature_names(config);
  for (const auto& problem : config.problems) {
    write_problem_report(config, problem, rows, names, warnings);
  }
}

void cmd_plot(const PipelineConfig& config, WarningSink* warnings) {
  PipelineConfig plotting = config;
  plotting.plot = true;
  cmd_embed(plotting, warnings);
  if (!plotting.problems.empty()) {
    const std::vector<Signal> signals = load_all_signals(plotting, warnings);
    const FeatureExtraction extraction = extract_features(plotting, signals);
    const auto names = selected_feature_names(plotting);
    for (const auto& problem : plotting.problems) {
      write_problem_stats(plotting, problem, extraction.rows, names);
    }
  }
}

void cmd_pipeline(const PipelineConfig& config, WarningSink* warnings) {
  validate_config(config);
  const std::vector<Signal> signals = load_all_signals(config, warnings);
  const FeatureExtraction extraction = extract_features(config, signals);

  write_text_file(features_csv_path(config),
                  feature_csv(extraction.rows, config.dimension == 3));
  Json sidecar = Json::array();
  for (const auto& ex : extraction.excluded) {
    sidecar.push_back(Json{{"source_id", ex.source_id},
                           {"label", ex.label},
                           {"reason", ex.reason}});
    warn(warnings, "excluded " + ex.label + "/" + ex.source_id + ": " + ex.reason);
  }
  write_text_file(config.output_dir / "features" / "exclusions.json",
                  sidecar.dump(2) + "\n");

  const auto names = selected_feature_names(config);
  for (const auto& problem : config.problems) {
    write_problem_stats(config, problem, extraction.rows, names);
    write_problem_report(config, problem, extraction.rows, names, warnings);
  }

  write_embeddings(config, signals);
}

}  // namespace stationplot
