#include "stationplot/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "stationplot/parallel.hpp"

namespace stationplot {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SplitIndices split(const LabeledDataset& dataset, double train_fraction,
                   std::uint64_t seed, bool stratify) {
  const Eigen::Index n = dataset.rows.rows();
  if (Eigen::Index(dataset.labels.size()) != n)
    throw ValidationError("split: labels/rows mismatch");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ValidationError("split: train_fraction must be in (0, 1)");

  std::map<std::string, std::vector<Eigen::Index>> by_class;
  for (Eigen::Index i = 0; i < n; ++i) by_class[dataset.labels[size_t(i)]].push_back(i);
  if (by_class.size() < 2) throw ValidationError("split: need >= 2 classes");

  std::mt19937_64 rng(seed);
  SplitIndices out;

  auto cut = [&](std::vector<Eigen::Index>& idx, size_t n_train) {
    std::shuffle(idx.begin(), idx.end(), rng);
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + long(n_train));
    out.test.insert(out.test.end(), idx.begin() + long(n_train), idx.end());
  };

  if (stratify) {
    for (auto& [label, idx] : by_class) {
      if (idx.size() < 2)
        throw ValidationError("split: class '" + label + "' has fewer than 2 members");
      size_t n_train = size_t(std::llround(train_fraction * double(idx.size())));
      n_train = std::clamp<size_t>(n_train, 1, idx.size() - 1);
      cut(idx, n_train);
    }
  } else {
    std::vector<Eigen::Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index(0));
    size_t n_train = size_t(std::llround(train_fraction * double(n)));
    n_train = std::clamp<size_t>(n_train, 1, size_t(n) - 1);
    cut(idx, n_train);
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Metrics metrics(long tp, long tn, long fp, long fn) {
  if (tp < 0 || tn < 0 || fp < 0 || fn < 0)
    throw ValidationError("metrics: negative count");
  const long total = tp + tn + fp + fn;
  if (total == 0) throw ValidationError("metrics: empty confusion matrix");
  Metrics m;
  if (tp + fn > 0) m.sensitivity = 100.0 * double(tp) / double(tp + fn);
  if (tn + fp > 0) m.specificity = 100.0 * double(tn) / double(tn + fp);
  m.accuracy = 100.0 * double(tp + tn) / double(total);
  return m;
}

namespace {

struct RunOutcome {
  bool ok = false;
  long tp = 0, tn = 0, fp = 0, fn = 0;
  int attempts = 1;
};

RunOutcome single_run(const LabeledDataset& dataset, const KernelSpec& kernel,
                      const ExperimentOptions& options, std::uint64_t run_seed) {
  RunOutcome out;
  const SplitIndices parts = split(dataset, options.train_fraction, run_seed,
                                   options.stratify);

  const Eigen::Index d = dataset.rows.cols();
  Eigen::MatrixXd train_rows(Eigen::Index(parts.train.size()), d);
  Eigen::VectorXd train_labels(Eigen::Index(parts.train.size()));
  for (size_t i = 0; i < parts.train.size(); ++i) {
    train_rows.row(Eigen::Index(i)) = dataset.rows.row(parts.train[i]);
    train_labels(Eigen::Index(i)) =
        dataset.labels[size_t(parts.train[i])] == dataset.positive_label ? 1.0 : -1.0;
  }

  TrainOptions topt;
  topt.C = options.C;
  topt.seed = run_seed;
  const SvmModel model = train_smo(train_rows, train_labels, kernel, topt);
  if (!model.converged) return out;

  for (Eigen::Index idx : parts.test) {
    const bool actual_pos = dataset.labels[size_t(idx)] == dataset.positive_label;
    const int prediction = predict(model, dataset.rows.row(idx).transpose());
    if (actual_pos)
      (prediction == 1 ? out.tp : out.fn) += 1;
    else
      (prediction == -1 ? out.tn : out.fp) += 1;
  }
  out.ok = true;
  return out;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd ms;
  if (values.empty()) return ms;
  double sum = 0.0;
  for (double v : values) sum += v;
  ms.mean = sum / double(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - ms.mean) * (v - ms.mean);
    ms.std = std::sqrt(ss / double(values.size() - 1));
  }
  return ms;
}

}  // namespace

EvalReport run_experiment(const LabeledDataset& dataset,
                          const ExperimentOptions& options) {
  if (options.runs < 1) throw ValidationError("run_experiment: runs must be >= 1");
  if (options.kernels.empty())
    throw ValidationError("run_experiment: no kernels configured");
  if (dataset.positive_label.empty())
    throw ValidationError("run_experiment: positive label not set");
  bool has_positive = false;
  for (const auto& l : dataset.labels) has_positive |= (l == dataset.positive_label);
  if (!has_positive)
    throw ValidationError("run_experiment: positive label '" +
                          dataset.positive_label + "' absent from dataset");

  EvalReport report;
  report.problem = dataset.problem;
  report.positive_label = dataset.positive_label;
  report.runs = options.runs;
  report.seed = options.seed;
  report.train_fraction = options.train_fraction;
  report.C = options.C;

  for (size_t ki = 0; ki < options.kernels.size(); ++ki) {
    const KernelSpec& kernel = options.kernels[ki];
    std::vector<RunOutcome> outcomes(size_t(options.runs));

    parallel_for(options.runs, options.threads, [&](long run) {
      // Retry a non-converged run with derived sub-seeds, then give up.
      const std::uint64_t base =
          derive_seed(options.seed, std::uint64_t(ki) * 1000003ULL + std::uint64_t(run));
      RunOutcome outcome;
      for (int attempt = 0; attempt < 3; ++attempt) {
        outcome = single_run(dataset, kernel, options, derive_seed(base, std::uint64_t(attempt)));
        outcome.attempts = attempt + 1;
        if (outcome.ok) break;
      }
      outcomes[size_t(run)] = outcome;
    });

    KernelReport kr;
    kr.kernel = kernel.name();
    std::vector<double> acc, sn, sp;
    for (long run = 0; run < options.runs; ++run) {  // index order: deterministic
      const RunOutcome& o = outcomes[size_t(run)];
      if (!o.ok) {
        kr.runs_excluded += 1;
        report.warnings.push_back("kernel " + kr.kernel + " run " +
                                  std::to_string(run) +
                                  ": training did not converge after 3 attempts; "
                                  "run excluded");
        continue;
      }
      kr.runs_completed += 1;
      kr.tp += o.tp;
      kr.tn += o.tn;
      kr.fp += o.fp;
      kr.fn += o.fn;
      const Metrics m = metrics(o.tp, o.tn, o.fp, o.fn);
      acc.push_back(m.accuracy);
      if (m.sensitivity) sn.push_back(*m.sensitivity);
      if (m.specificity) sp.push_back(*m.specificity);
    }
    kr.accuracy = mean_std(acc);
    kr.sensitivity = mean_std(sn);
    kr.specificity = mean_std(sp);
    report.kernels.push_back(std::move(kr));
  }
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["problem"] = report.problem;
  doc["positive_label"] = report.positive_label;
  doc["runs"] = report.runs;
  doc["seed"] = report.seed;
  doc["train_fraction"] = report.train_fraction;
  doc["C"] = report.C;
  auto kernels = nlohmann::ordered_json::array();
  for (const auto& k : report.kernels) {
    kernels.push_back({{"kernel", k.kernel},
                       {"accuracy", {{"mean", k.accuracy.mean}, {"std", k.accuracy.std}}},
                       {"sensitivity",
                        {{"mean", k.sensitivity.mean}, {"std", k.sensitivity.std}}},
                       {"specificity",
                        {{"mean", k.specificity.mean}, {"std", k.specificity.std}}},
                       {"confusion", {{"tp", k.tp}, {"tn", k.tn}, {"fp", k.fp}, {"fn", k.fn}}},
                       {"runs_completed", k.runs_completed},
                       {"runs_excluded", k.runs_excluded}});
  }
  doc["kernels"] = kernels;
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "problem: %s  (positive: %s, runs: %ld, seed: %llu)\n",
                report.problem.c_str(), report.positive_label.c_str(), report.runs,
                (unsigned long long)report.seed);
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-12s %-8s %18s\n", "kernel", "measure",
                "mean +- std (%)");
  out += buf;
  for (const auto& k : report.kernels) {
    const struct {
      const char* name;
      const MeanStd& ms;
    } rows[] = {{"AC", k.accuracy}, {"SN", k.sensitivity}, {"SP", k.specificity}};
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof(buf), "%-12s %-8s %9.2f +- %.2f\n", k.kernel.c_str(),
                    row.name, row.ms.mean, row.ms.std);
      out += buf;
    }
  }
  if (!report.warnings.empty()) {
    out += "warnings:\n";
    for (const auto& w : report.warnings) out += "  " + w + "\n";
  }
  return out;
}

}  // namespace stationplot
