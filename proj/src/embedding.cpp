#include "stationplot/embedding.hpp"

#include <cstdio>

namespace stationplot {

namespace {

Eigen::VectorXd prepared_series(const Signal& signal, const EmbeddingConfig& config,
                                int min_len) {
  Eigen::VectorXd base = signal.samples;
  if (config.detrend_mode != DetrendMode::None)
    base = detrend(base, config.detrend_mode).residual;
  if (base.size() <= min_len)
    throw ValidationError("stationplot: signal '" + signal.source_id + "' has " +
                          std::to_string(base.size()) + " samples, needs more than " +
                          std::to_string(min_len) + " for order " +
                          std::to_string(config.base_order));
  return base;
}

}  // namespace

PointCloud stationplot2d(const Signal& signal, const EmbeddingConfig& config) {
  const int n = config.base_order;
  if (n < 0) throw ValidationError("stationplot: base order must be >= 0");
  const Eigen::VectorXd base = prepared_series(signal, config, n + 1);

  const Eigen::VectorXd x1 = difference(base, n);      // length N - n
  const Eigen::VectorXd x2 = difference(base, n + 1);  // length N - n - 1

  const Eigen::Index count = x2.size();
  PointCloud cloud;
  cloud.dimension = 2;
  cloud.order = n;
  cloud.source_id = signal.source_id;
  cloud.points.resize(count, 2);
  cloud.points.col(0) = x1.tail(count);
  cloud.points.col(1) = x2;
  return cloud;
}

PointCloud stationplot3d(const Signal& signal, const EmbeddingConfig& config) {
  const int n = config.base_order;
  if (n < 0) throw ValidationError("stationplot: base order must be >= 0");
  const Eigen::VectorXd base = prepared_series(signal, config, n + 2);

  const Eigen::VectorXd x1 = difference(base, n);
  const Eigen::VectorXd x2 = difference(base, n + 1);
  const Eigen::VectorXd x3 = difference(base, n + 2);

  const Eigen::Index count = x3.size();
  PointCloud cloud;
  cloud.dimension = 3;
  cloud.order = n;
  cloud.source_id = signal.source_id;
  cloud.points.resize(count, 3);
  cloud.points.col(0) = x1.tail(count);
  cloud.points.col(1) = x2.tail(count);
  cloud.points.col(2) = x3;
  return cloud;
}

std::string point_cloud_csv(const PointCloud& cloud) {
  std::string out = cloud.dimension == 3 ? "x,y,z\n" : "x,y\n";
  char buf[32];
  for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
    for (Eigen::Index j = 0; j < cloud.points.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", cloud.points(i, j));
      out += buf;
      out += (j + 1 < cloud.points.cols()) ? ',' : '\n';
    }
  }
  return out;
}

}  // namespace stationplot
