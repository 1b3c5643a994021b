#include "stationplot/features.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace stationplot {

double circularity(double area, double perimeter) {
  if (!(perimeter > 0.0)) throw ValidationError("circularity: perimeter must be > 0");
  return 4.0 * std::numbers::pi * area / (perimeter * perimeter);
}

double aspect_ratio(const Eigen::Ref<const Eigen::MatrixXd>& points, bool* degenerate) {
  if (points.rows() < 2)
    throw ValidationError("aspect_ratio: need at least 2 points");
  if (points.cols() < 2)
    throw ValidationError("aspect_ratio: points must have >= 2 coordinates");
  if (degenerate) *degenerate = false;

  const Eigen::MatrixXd xy = points.leftCols(2);
  const Eigen::RowVector2d mean = xy.colwise().mean();
  const Eigen::MatrixXd centered = xy.rowwise() - mean;
  const Eigen::Matrix2d cov =
      centered.transpose() * centered / double(xy.rows() - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(cov);
  const double l_minor = solver.eigenvalues()(0);
  const double l_major = solver.eigenvalues()(1);
  if (l_major <= 0.0)
    throw ValidationError("aspect_ratio: all points identical");
  if (l_minor <= l_major * 1e-15) {
    if (degenerate) *degenerate = true;
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(l_major / l_minor);
}

CHGFeatureVector chg_features(const PointCloud& cloud) {
  CHGFeatureVector f;
  f.source_id = cloud.source_id;
  f.order = cloud.order;

  if (cloud.dimension == 2) {
    const ConvexHull2D hull = quickhull2d(cloud.points);
    f.area = hull_area(hull);
    f.perimeter = hull_perimeter(hull);
  } else if (cloud.dimension == 3) {
    const ConvexHull3D hull = quickhull3d(cloud.points);
    f.volume = hull_volume(hull);
    f.surface_area = hull_surface_area(hull);
    const ConvexHull2D planar = quickhull2d(cloud.points.leftCols(2));
    f.area = hull_area(planar);
    f.perimeter = hull_perimeter(planar);
  } else {
    throw ValidationError("chg_features: cloud dimension must be 2 or 3");
  }

  f.circularity = circularity(f.area, f.perimeter);
  f.aspect_ratio = aspect_ratio(cloud.points, &f.aspect_degenerate);
  return f;
}

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string feature_csv(const std::vector<CHGFeatureVector>& rows, bool with_3d) {
  std::string out = "source_id,label,order,area,perimeter,circularity,aspect_ratio";
  if (with_3d) out += ",volume,surface_area";
  out += '\n';
  for (const auto& r : rows) {
    out += r.source_id + "," + r.label + "," + std::to_string(r.order);
    out += "," + format_value(r.area);
    out += "," + format_value(r.perimeter);
    out += "," + format_value(r.circularity);
    out += "," + format_value(r.aspect_ratio);
    if (with_3d) {
      out += "," + format_value(r.volume.value_or(std::nan("")));
      out += "," + format_value(r.surface_area.value_or(std::nan("")));
    }
    out += '\n';
  }
  return out;
}

std::vector<CHGFeatureVector> parse_feature_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("feature CSV: empty input");
  const bool with_3d = line.find(",volume,") != std::string::npos;
  const size_t expected = with_3d ? 9 : 7;

  std::vector<CHGFeatureVector> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != expected)
      throw DataError("feature CSV line " + std::to_string(line_no) + ": expected " +
                      std::to_string(expected) + " columns, got " +
                      std::to_string(cells.size()));
    try {
      CHGFeatureVector r;
      r.source_id = cells[0];
      r.label = cells[1];
      r.order = std::stoi(cells[2]);
      r.area = std::stod(cells[3]);
      r.perimeter = std::stod(cells[4]);
      r.circularity = std::stod(cells[5]);
      r.aspect_ratio = std::stod(cells[6]);
      r.aspect_degenerate = std::isinf(r.aspect_ratio);
      if (with_3d) {
        r.volume = std::stod(cells[7]);
        r.surface_area = std::stod(cells[8]);
      }
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw DataError("feature CSV line " + std::to_string(line_no) +
                      ": non-numeric value");
    }
  }
  return rows;
}

Eigen::MatrixXd feature_matrix(const std::vector<CHGFeatureVector>& rows, bool with_3d) {
  const Eigen::Index d = with_3d ? 6 : 4;
  Eigen::MatrixXd m(Eigen::Index(rows.size()), d);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto& r = rows[size_t(i)];
    m(i, 0) = r.area;
    m(i, 1) = r.perimeter;
    m(i, 2) = r.circularity;
    m(i, 3) = r.aspect_ratio;
    if (with_3d) {
      m(i, 4) = r.volume.value_or(std::numeric_limits<double>::quiet_NaN());
      m(i, 5) = r.surface_area.value_or(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return m;
}

}  // namespace stationplot
