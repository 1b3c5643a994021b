#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "stationplot/hull.hpp"

namespace stationplot {

// The scalar shape descriptors of a StationPlot's region of interest.
// For 3D clouds the planar descriptors are taken on the first two
// coordinates (which coincide with the 2D embedding at the same order on the
// shared index range); volume and surface_area come from the 3D hull.
struct CHGFeatureVector {
  double area = 0.0;         // squared amplitude units
  double perimeter = 0.0;    // amplitude units
  double circularity = 0.0;  // 4*pi*area/perimeter^2, in (0, 1]
  double aspect_ratio = 1.0; // sqrt(lambda1/lambda2) of the point covariance
  bool aspect_degenerate = false;  // true when lambda2 = 0 (ratio is +inf)
  std::optional<double> volume;        // 3D only
  std::optional<double> surface_area;  // 3D only

  std::string source_id;
  std::string label;
  int order = 0;
};

// 4*pi*area / perimeter^2; 1 for a disk, < 1 otherwise.
double circularity(double area, double perimeter);

// Principal-axis length ratio sqrt(lambda1/lambda2) from the 2x2 covariance
// of all points (first two coordinates). A zero minor eigenvalue yields
// +infinity and sets *degenerate when provided.
double aspect_ratio(const Eigen::Ref<const Eigen::MatrixXd>& points,
                    bool* degenerate = nullptr);

inline double aspect_ratio(const PointCloud& cloud, bool* degenerate = nullptr) {
  return aspect_ratio(cloud.points, degenerate);
}

// Hull construction plus every descriptor applicable to the cloud dimension.
CHGFeatureVector chg_features(const PointCloud& cloud);

// CSV emission: header + one row per feature vector, 17 significant digits.
// Column layout: source_id,label,order,area,perimeter,circularity,
// aspect_ratio[,volume,surface_area].
std::string feature_csv(const std::vector<CHGFeatureVector>& rows, bool with_3d);
std::vector<CHGFeatureVector> parse_feature_csv(const std::string& text);

inline constexpr const char* kFeatureNames2D[] = {"area", "perimeter", "circularity",
                                                  "aspect_ratio"};
inline constexpr const char* kFeatureNames3D[] = {"area",         "perimeter",
                                                  "circularity",  "aspect_ratio",
                                                  "volume",       "surface_area"};

// Numeric matrix view of the feature rows (columns per the names above);
// degenerate aspect ratios surface as +inf and should be screened upstream.
Eigen::MatrixXd feature_matrix(const std::vector<CHGFeatureVector>& rows, bool with_3d);

}  // namespace stationplot
