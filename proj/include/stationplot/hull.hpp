#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <vector>

#include "stationplot/embedding.hpp"
#include "stationplot/types.hpp"

namespace stationplot {

// Relative tolerance for orientation / membership predicates, scaled by the
// bounding-box diagonal of the input cloud.
inline constexpr double kHullEpsRel = 1e-9;

// Strict 2D hull: vertices in counter-clockwise order starting from the
// lexicographically smallest vertex; collinear boundary points excluded.
struct ConvexHull2D {
  Eigen::Matrix<double, Eigen::Dynamic, 2> vertices;
  Eigen::Index source_count = 0;
  double tolerance = 0.0;  // absolute predicate tolerance used at build time
};

// Watertight triangulated 3D hull with outward unit facet normals.
struct ConvexHull3D {
  Eigen::Matrix<double, Eigen::Dynamic, 3> vertices;
  std::vector<std::array<int, 3>> facets;  // indices into vertices, CCW from outside
  Eigen::Matrix<double, Eigen::Dynamic, 3> normals;  // one unit normal per facet
  Eigen::Index source_count = 0;
  double tolerance = 0.0;
};

ConvexHull2D quickhull2d(const Eigen::Ref<const Eigen::MatrixXd>& points);
ConvexHull3D quickhull3d(const Eigen::Ref<const Eigen::MatrixXd>& points);

inline ConvexHull2D quickhull2d(const PointCloud& cloud) {
  if (cloud.dimension != 2)
    throw ValidationError("quickhull2d: cloud dimension must be 2");
  return quickhull2d(cloud.points);
}

inline ConvexHull3D quickhull3d(const PointCloud& cloud) {
  if (cloud.dimension != 3)
    throw ValidationError("quickhull3d: cloud dimension must be 3");
  return quickhull3d(cloud.points);
}

// Shoelace area: half the absolute cyclic sum of cross products.
double hull_area(const ConvexHull2D& hull);

// Cyclic sum of Euclidean edge lengths.
double hull_perimeter(const ConvexHull2D& hull);

// Absolute sum of signed tetrahedra (origin, facet) volumes.
double hull_volume(const ConvexHull3D& hull);

double hull_surface_area(const ConvexHull3D& hull);

// Membership within the build-time tolerance; boundary counts as inside.
bool contains(const ConvexHull2D& hull, const Eigen::Vector2d& p);
bool contains(const ConvexHull3D& hull, const Eigen::Vector3d& p);

}  // namespace stationplot
