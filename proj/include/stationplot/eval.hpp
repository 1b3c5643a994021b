#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stationplot/svm.hpp"
#include "stationplot/types.hpp"

namespace stationplot {

struct LabeledDataset {
  Eigen::MatrixXd rows;
  std::vector<std::string> labels;    // class tag per row
  std::string positive_label;         // maps to +1 in training
  std::string problem = "custom";     // "A_vs_E", "ABCD_vs_E", or "custom"
};

struct SplitIndices {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> test;
};

// Stratified split: per class, round(train_fraction * n) rows go to the
// training side; shuffle within class is driven by the seed. With
// stratify = false a single pooled shuffle is split instead.
SplitIndices split(const LabeledDataset& dataset, double train_fraction,
                   std::uint64_t seed, bool stratify = true);

struct Metrics {
  std::optional<double> sensitivity;  // percent; absent when TP+FN = 0
  std::optional<double> specificity;  // percent; absent when TN+FP = 0
  double accuracy = 0.0;              // percent
};

Metrics metrics(long tp, long tn, long fp, long fn);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample std over runs; 0 when runs < 2
};

struct KernelReport {
  std::string kernel;
  MeanStd accuracy, sensitivity, specificity;
  long tp = 0, tn = 0, fp = 0, fn = 0;  // confusion totals over all runs
  long runs_completed = 0;
  long runs_excluded = 0;
};

struct EvalReport {
  std::string problem;
  std::string positive_label;
  long runs = 0;
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  double C = 1.0;
  std::vector<KernelReport> kernels;
  std::vector<std::string> warnings;
};

struct ExperimentOptions {
  std::vector<KernelSpec> kernels;
  double C = 1.0;
  long runs = 100;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  bool stratify = true;
  int threads = 1;  // <= 0 means hardware concurrency
};

// The repeated-split protocol: per kernel, `runs` independent
// split -> standardize -> train -> test cycles with per-run RNG streams
// derived from the master seed; aggregation is index-ordered so the report
// is byte-identical for any thread count.
EvalReport run_experiment(const LabeledDataset& dataset, const ExperimentOptions& options);

std::string report_to_json(const EvalReport& report);
// Fixed-width text table, one kernel block per row group ("mean +- std").
std::string report_to_table(const EvalReport& report);

// Per-run seed derivation (SplitMix64 over master ^ counter); exposed for
// tests that need to reproduce a single run.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

}  // namespace stationplot
