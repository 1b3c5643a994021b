#include "stationplot/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

namespace stationplot {

std::string KernelSpec::name() const {
  switch (kind) {
    case Kind::Linear:
      return "linear";
    case Kind::Polynomial:
      return degree == 2 ? "quadratic" : "polynomial";
    case Kind::Rbf:
      return "rbf";
  }
  return "unknown";
}

KernelSpec KernelSpec::parse(const std::string& name) {
  if (name == "linear") return linear();
  if (name == "quadratic") return quadratic();
  if (name == "polynomial") return polynomial();
  if (name == "rbf") return rbf();
  throw ValidationError("unknown kernel '" + name +
                        "' (valid kinds: linear, quadratic, polynomial, rbf)");
}

void KernelSpec::validate() const {
  if (kind == Kind::Polynomial && degree < 2)
    throw ValidationError("polynomial kernel needs degree >= 2");
  if (kind == Kind::Rbf && !(sigma > 0.0))
    throw ValidationError("rbf kernel needs sigma > 0");
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& u,
                   const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (u.size() != v.size())
    throw ValidationError("kernel_eval: dimension mismatch (" +
                          std::to_string(u.size()) + " vs " + std::to_string(v.size()) +
                          ")");
  switch (spec.kind) {
    case KernelSpec::Kind::Linear:
      return u.dot(v);
    case KernelSpec::Kind::Polynomial:
      return std::pow(u.dot(v) + spec.coef0, spec.degree);
    case KernelSpec::Kind::Rbf:
      return std::exp(-(u - v).squaredNorm() / (2.0 * spec.sigma * spec.sigma));
  }
  throw ValidationError("kernel_eval: unknown kernel kind");
}

Scaler standardize_fit(const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  if (rows.rows() < 2) throw ValidationError("standardize_fit: need >= 2 rows");
  Scaler s;
  s.fit_count = rows.rows();
  s.mean = rows.colwise().mean();
  Eigen::VectorXd var =
      (rows.rowwise() - s.mean.transpose()).array().square().colwise().sum() /
      double(rows.rows() - 1);
  s.std.resize(var.size());
  s.zero_variance.assign(size_t(var.size()), false);
  for (Eigen::Index j = 0; j < var.size(); ++j) {
    const double sd = std::sqrt(var(j));
    if (sd == 0.0) {
      s.zero_variance[size_t(j)] = true;
      s.std(j) = 1.0;  // constant column maps to 0 via the mean
    } else {
      s.std(j) = sd;
    }
  }
  return s;
}

Eigen::MatrixXd standardize_apply(const Scaler& scaler,
                                  const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  if (rows.cols() != scaler.mean.size())
    throw ValidationError("standardize_apply: dimension mismatch");
  return (rows.rowwise() - scaler.mean.transpose()).array().rowwise() /
         scaler.std.transpose().array();
}

namespace {

Eigen::MatrixXd gram_matrix(const KernelSpec& kernel, const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd k(n, n);
  if (kernel.kind == KernelSpec::Kind::Linear) {
    k.noalias() = x * x.transpose();
  } else if (kernel.kind == KernelSpec::Kind::Polynomial) {
    k.noalias() = x * x.transpose();
    k = (k.array() + kernel.coef0).pow(kernel.degree);
  } else {
    const Eigen::VectorXd sq = x.rowwise().squaredNorm();
    k.noalias() = -2.0 * x * x.transpose();
    k.colwise() += sq;
    k.rowwise() += sq.transpose();
    k = (-k.array() / (2.0 * kernel.sigma * kernel.sigma)).exp();
  }
  return k;
}

double dual_objective(const Eigen::VectorXd& alpha, const Eigen::VectorXd& y,
                      const Eigen::MatrixXd& k) {
  const Eigen::VectorXd ay = alpha.array() * y.array();
  return alpha.sum() - 0.5 * ay.dot(k * ay);
}

}  // namespace

SvmModel train_smo(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                   const Eigen::Ref<const Eigen::VectorXd>& labels,
                   const KernelSpec& kernel, const TrainOptions& options) {
  kernel.validate();
  const Eigen::Index n = rows.rows();
  if (n < 2) throw ValidationError("train_smo: need >= 2 rows");
  if (labels.size() != n) throw ValidationError("train_smo: labels/rows mismatch");
  bool has_pos = false, has_neg = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels(i) == 1.0)
      has_pos = true;
    else if (labels(i) == -1.0)
      has_neg = true;
    else
      throw ValidationError("train_smo: labels must be +-1");
  }
  if (!has_pos || !has_neg)
    throw ValidationError("train_smo: both classes must be present");

  SvmModel model;
  model.kernel = kernel;

  Eigen::MatrixXd x;
  if (options.standardize) {
    model.scaler = standardize_fit(rows);
    x = standardize_apply(model.scaler, rows);
  } else {
    model.scaler.mean = Eigen::VectorXd::Zero(rows.cols());
    model.scaler.std = Eigen::VectorXd::Ones(rows.cols());
    model.scaler.zero_variance.assign(size_t(rows.cols()), false);
    model.scaler.fit_count = n;
    x = rows;
  }

  // Canonical row order: lexicographic over (features, label). Training is
  // then independent of the order the caller assembled the rows in.
  std::vector<Eigen::Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (x(a, j) != x(b, j)) return x(a, j) < x(b, j);
    }
    return labels(a) < labels(b);
  });
  Eigen::MatrixXd xs(n, x.cols());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    xs.row(i) = x.row(perm[size_t(i)]);
    y(i) = labels(perm[size_t(i)]);
  }

  const Eigen::MatrixXd k = gram_matrix(kernel, xs);
  const double c_box = options.C;
  const double tol = options.tol;
  const long max_sweeps = options.max_passes > 0 ? options.max_passes : 50 * long(n);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  double b = 0.0;
  std::mt19937_64 rng(options.seed);

  auto decision = [&](Eigen::Index i) {
    return (alpha.array() * y.array()).matrix().dot(k.col(i)) + b;
  };

  // One analytic step on the pair (i, j). Returns true when alpha moved.
  auto take_step = [&](Eigen::Index i, Eigen::Index j, double e_i) -> bool {
    if (i == j) return false;
    const double e_j = decision(j) - y(j);
    const double ai_old = alpha(i), aj_old = alpha(j);
    double lo, hi;
    if (y(i) != y(j)) {
      lo = std::max(0.0, aj_old - ai_old);
      hi = std::min(c_box, c_box + aj_old - ai_old);
    } else {
      lo = std::max(0.0, ai_old + aj_old - c_box);
      hi = std::min(c_box, ai_old + aj_old);
    }
    if (lo >= hi) return false;
    const double eta = 2.0 * k(i, j) - k(i, i) - k(j, j);
    if (eta >= 0.0) return false;  // a different partner will make progress
    // Round results within `dust` of a box bound onto the bound itself.
    // Updates otherwise strand ~1e-12 residues on points that belong at 0;
    // such phantom support vectors would later corrupt the free-vector bias
    // average (they sit strictly inside the margin).
    const double dust = 1e-8 * c_box;
    double aj = aj_old - y(j) * (e_i - e_j) / eta;
    aj = std::clamp(aj, lo, hi);
    if (aj < dust)
      aj = 0.0;
    else if (aj > c_box - dust)
      aj = c_box;
    if (std::abs(aj - aj_old) < 1e-8 * (aj + aj_old + 1e-8)) return false;
    double ai = ai_old + y(i) * y(j) * (aj_old - aj);
    if (ai < dust)
      ai = 0.0;
    else if (ai > c_box - dust)
      ai = c_box;
    alpha(i) = ai;
    alpha(j) = aj;

    const double b1 = b - e_i - y(i) * (ai - ai_old) * k(i, i) -
                      y(j) * (aj - aj_old) * k(i, j);
    const double b2 = b - e_j - y(i) * (ai - ai_old) * k(i, j) -
                      y(j) * (aj - aj_old) * k(j, j);
    if (ai > 0.0 && ai < c_box)
      b = b1;
    else if (aj > 0.0 && aj < c_box)
      b = b2;
    else
      b = 0.5 * (b1 + b2);

    if (options.objective_trace)
      options.objective_trace->push_back(dual_objective(alpha, y, k));
    return true;
  };

  long sweeps = 0;
  bool converged = false;
  while (sweeps < max_sweeps) {
    ++sweeps;
    long violations = 0, updates = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double e_i = decision(i) - y(i);
      const bool violates = (y(i) * e_i < -tol && alpha(i) < c_box) ||
                            (y(i) * e_i > tol && alpha(i) > 0.0);
      if (!violates) continue;
      ++violations;
      const Eigen::Index j0 =
          Eigen::Index(std::uniform_int_distribution<long>(0, long(n) - 1)(rng));
      bool stepped = take_step(i, j0, e_i);
      for (Eigen::Index off = 0; !stepped && off < n; ++off)
        stepped = take_step(i, (j0 + off) % n, e_i);
      if (stepped) ++updates;
    }
    // A sweep that moved nothing cannot be improved by any later sweep: for
    // every flagged i all n partners were tried. That is the classical
    // termination point, so it counts as convergence alongside a clean
    // sweep with no flagged rows at all.
    if (violations == 0 || updates == 0) {
      converged = true;
      break;
    }
  }
  model.converged = converged;
  model.sweeps = sweeps;

  // Tighten the bias on the free support vectors.
  double b_sum = 0.0;
  long b_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (alpha(i) > 0.0 && alpha(i) < c_box) {
      b_sum += y(i) - (alpha.array() * y.array()).matrix().dot(k.col(i));
      ++b_count;
    }
  }
  if (b_count > 0) b = b_sum / double(b_count);
  model.bias = b;

  std::vector<Eigen::Index> sv;
  for (Eigen::Index i = 0; i < n; ++i)
    if (alpha(i) > 0.0) sv.push_back(i);
  model.support_vectors.resize(Eigen::Index(sv.size()), xs.cols());
  model.alphas.resize(Eigen::Index(sv.size()));
  model.labels.resize(Eigen::Index(sv.size()));
  for (size_t s = 0; s < sv.size(); ++s) {
    model.support_vectors.row(Eigen::Index(s)) = xs.row(sv[s]);
    model.alphas(Eigen::Index(s)) = alpha(sv[s]);
    model.labels(Eigen::Index(s)) = y(sv[s]);
  }
  return model;
}

double decision_value(const SvmModel& model,
                      const Eigen::Ref<const Eigen::VectorXd>& row) {
  if (row.size() != model.scaler.mean.size())
    throw ValidationError("decision_value: dimension mismatch");
  const Eigen::VectorXd scaled =
      standardize_apply(model.scaler, row.transpose()).row(0);
  double sum = model.bias;
  for (Eigen::Index s = 0; s < model.alphas.size(); ++s)
    sum += model.alphas(s) * model.labels(s) *
           kernel_eval(model.kernel, model.support_vectors.row(s), scaled);
  return sum;
}

int predict(const SvmModel& model, const Eigen::Ref<const Eigen::VectorXd>& row) {
  return decision_value(model, row) < 0.0 ? -1 : 1;
}

std::string model_to_json(const SvmModel& model) {
  nlohmann::ordered_json doc;
  doc["format"] = "stationplot-svm";
  doc["version"] = 1;
  doc["kernel"] = {{"kind", model.kernel.name()},
                   {"degree", model.kernel.degree},
                   {"coef0", model.kernel.coef0},
                   {"sigma", model.kernel.sigma}};
  doc["scaler"] = {{"mean", std::vector<double>(model.scaler.mean.begin(),
                                                model.scaler.mean.end())},
                   {"std", std::vector<double>(model.scaler.std.begin(),
                                               model.scaler.std.end())},
                   {"zero_variance", model.scaler.zero_variance}};
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
    rows.push_back(std::vector<double>(model.support_vectors.row(i).begin(),
                                       model.support_vectors.row(i).end()));
  }
  doc["support_vectors"] = rows;
  doc["alphas"] = std::vector<double>(model.alphas.begin(), model.alphas.end());
  doc["labels"] = std::vector<double>(model.labels.begin(), model.labels.end());
  doc["bias"] = model.bias;
  doc["converged"] = model.converged;
  return doc.dump(2) + "\n";
}

SvmModel model_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
  if (doc.value("format", "") != "stationplot-svm" || doc.value("version", 0) != 1)
    throw DataError("model JSON: unsupported format or version");

  SvmModel m;
  const auto& kj = doc.at("kernel");
  m.kernel = KernelSpec::parse(kj.at("kind").get<std::string>());
  m.kernel.degree = kj.at("degree").get<int>();
  m.kernel.coef0 = kj.at("coef0").get<double>();
  m.kernel.sigma = kj.at("sigma").get<double>();

  const auto mean = doc.at("scaler").at("mean").get<std::vector<double>>();
  const auto sd = doc.at("scaler").at("std").get<std::vector<double>>();
  m.scaler.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), Eigen::Index(mean.size()));
  m.scaler.std = Eigen::Map<const Eigen::VectorXd>(sd.data(), Eigen::Index(sd.size()));
  m.scaler.zero_variance = doc.at("scaler").at("zero_variance").get<std::vector<bool>>();

  const auto rows = doc.at("support_vectors").get<std::vector<std::vector<double>>>();
  m.support_vectors.resize(Eigen::Index(rows.size()), m.scaler.mean.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (Eigen::Index(rows[i].size()) != m.scaler.mean.size())
      throw DataError("model JSON: ragged support vector rows");
    m.support_vectors.row(Eigen::Index(i)) =
        Eigen::Map<const Eigen::VectorXd>(rows[i].data(), Eigen::Index(rows[i].size()));
  }
  const auto alphas = doc.at("alphas").get<std::vector<double>>();
  const auto labels = doc.at("labels").get<std::vector<double>>();
  m.alphas = Eigen::Map<const Eigen::VectorXd>(alphas.data(), Eigen::Index(alphas.size()));
  m.labels = Eigen::Map<const Eigen::VectorXd>(labels.data(), Eigen::Index(labels.size()));
  m.bias = doc.at("bias").get<double>();
  m.converged = doc.value("converged", true);
  m.scaler.fit_count = m.support_vectors.rows();
  return m;
}

}  // namespace stationplot
