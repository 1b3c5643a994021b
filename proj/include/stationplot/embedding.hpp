#pragma once

#include <Eigen/Dense>

#include <string>

#include "stationplot/timeseries.hpp"
#include "stationplot/types.hpp"

namespace stationplot {

struct EmbeddingConfig {
  int base_order = 1;  // n
  int dimension = 2;   // 2 or 3
  DetrendMode detrend_mode = DetrendMode::None;
};

// Point cloud of successive-difference coordinates. Row i is one point; all
// coordinates of a point reference the same sample time (latest-sample
// anchoring), so the higher-order series dictates the point count:
// 2D -> N - (n+1) points, 3D -> N - (n+2).
struct PointCloud {
  Eigen::MatrixXd points;  // count x dimension
  int dimension = 2;
  int order = 0;
  std::string source_id;

  Eigen::Index count() const { return points.rows(); }
};

// (difference(x, n), difference(x, n+1)) anchored at the same time index:
// the first element of the order-n series is dropped so both columns align.
PointCloud stationplot2d(const Signal& signal, const EmbeddingConfig& config);

// (difference(x, n), difference(x, n+1), difference(x, n+2)), same anchoring.
PointCloud stationplot3d(const Signal& signal, const EmbeddingConfig& config);

inline PointCloud stationplot(const Signal& signal, const EmbeddingConfig& config) {
  if (config.dimension == 2) return stationplot2d(signal, config);
  if (config.dimension == 3) return stationplot3d(signal, config);
  throw ValidationError("stationplot: dimension must be 2 or 3");
}

// CSV with x,y[,z] header, one row per point, 17 significant digits.
std::string point_cloud_csv(const PointCloud& cloud);

}  // namespace stationplot
