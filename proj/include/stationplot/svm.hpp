#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "stationplot/types.hpp"

namespace stationplot {

struct KernelSpec {
  enum class Kind { Linear, Polynomial, Rbf };
  Kind kind = Kind::Linear;
  int degree = 3;      // polynomial only
  double coef0 = 1.0;  // polynomial offset
  double sigma = 2.0;  // rbf width: exp(-|u-v|^2 / (2 sigma^2))

  static KernelSpec linear() { return {Kind::Linear, 0, 0.0, 0.0}; }
  static KernelSpec quadratic() { return {Kind::Polynomial, 2, 1.0, 0.0}; }
  static KernelSpec polynomial(int degree = 3, double coef0 = 1.0) {
    return {Kind::Polynomial, degree, coef0, 0.0};
  }
  static KernelSpec rbf(double sigma = 2.0) { return {Kind::Rbf, 0, 0.0, sigma}; }

  // "linear", "quadratic", "polynomial", "rbf"
  std::string name() const;
  // Inverse of name(); accepts the four names above.
  static KernelSpec parse(const std::string& name);

  void validate() const;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& u,
                   const Eigen::Ref<const Eigen::VectorXd>& v);

// Per-feature z-scoring parameters, fitted on training rows only.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  std::vector<bool> zero_variance;  // flagged columns map to 0
  Eigen::Index fit_count = 0;       // rows seen at fit time
};

Scaler standardize_fit(const Eigen::Ref<const Eigen::MatrixXd>& rows);
Eigen::MatrixXd standardize_apply(const Scaler& scaler,
                                  const Eigen::Ref<const Eigen::MatrixXd>& rows);

struct TrainOptions {
  double C = 1.0;
  double tol = 1e-3;
  long max_passes = 0;  // sweep cap; 0 means 50 * n
  std::uint64_t seed = 0;
  bool standardize = true;
  // When set, the dual objective is appended after every accepted pair
  // update (test instrumentation; costs O(n^2) per update).
  std::vector<double>* objective_trace = nullptr;
};

struct SvmModel {
  Eigen::MatrixXd support_vectors;  // standardized rows with alpha > 0
  Eigen::VectorXd alphas;
  Eigen::VectorXd labels;  // +-1 per support vector
  double bias = 0.0;
  KernelSpec kernel;
  Scaler scaler;
  bool converged = true;
  long sweeps = 0;
};

// Binary soft-margin SVM trained by sequential minimal optimization.
// Rows are canonicalized (sorted) internally, so the model is invariant to
// row permutation of the training set. Labels must be +-1 and both classes
// present. Non-convergence past the sweep cap returns a best-effort model
// with converged = false.
SvmModel train_smo(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                   const Eigen::Ref<const Eigen::VectorXd>& labels,
                   const KernelSpec& kernel, const TrainOptions& options = {});

double decision_value(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& row);
// sign of the decision value; exact zero breaks to +1.
int predict(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& row);

std::string model_to_json(const SvmModel& model);
SvmModel model_from_json(const std::string& text);

}  // namespace stationplot
