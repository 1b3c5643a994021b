#include "stationplot/hull.hpp"

#include <algorithm>
#include <cmath>

namespace stationplot {

namespace {

// Twice the signed area of triangle (a, b, p); > 0 when p is left of a->b.
inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& p) {
  return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

struct Builder {
  const Eigen::MatrixXd& pts;
  double eps;
  std::vector<int> hull;  // vertex indices, CCW

  Eigen::Vector2d at(int i) const { return pts.row(i).head<2>(); }

  // Appends the hull vertices strictly right of a->b, ordered from a to b.
  // candidates are already known to lie right of a->b.
  void expand(int a, int b, const std::vector<int>& candidates) {
    if (candidates.empty()) return;
    const Eigen::Vector2d pa = at(a), pb = at(b);
    const double len = (pb - pa).norm();
    int far_idx = -1;
    double far_dist = 0.0;
    for (int i : candidates) {
      const double dist = -cross2(pa, pb, at(i)) / len;
      if (dist > far_dist) {
        far_dist = dist;
        far_idx = i;
      }
    }
    if (far_idx < 0) return;  // all within tolerance of the chord

    const Eigen::Vector2d pf = at(far_idx);
    std::vector<int> right_af, right_fb;
    const double len_af = (pf - pa).norm(), len_fb = (pb - pf).norm();
    for (int i : candidates) {
      if (i == far_idx) continue;
      if (-cross2(pa, pf, at(i)) > eps * len_af)
        right_af.push_back(i);
      else if (-cross2(pf, pb, at(i)) > eps * len_fb)
        right_fb.push_back(i);
    }
    expand(a, far_idx, right_af);
    hull.push_back(far_idx);
    expand(far_idx, b, right_fb);
  }
};

}  // namespace

ConvexHull2D quickhull2d(const Eigen::Ref<const Eigen::MatrixXd>& points) {
  const Eigen::Index n = points.rows();
  if (points.cols() != 2) throw ValidationError("quickhull2d: points must be Nx2");
  if (n < 3)
    throw DegenerateGeometryError("quickhull2d: need at least 3 points, got " +
                                  std::to_string(n));
  if (!points.allFinite())
    throw ValidationError("quickhull2d: non-finite coordinate in input");

  const Eigen::Vector2d lo = points.colwise().minCoeff();
  const Eigen::Vector2d hi = points.colwise().maxCoeff();
  const double diag = (hi - lo).norm();
  const double eps = kHullEpsRel * diag;
  if (diag == 0.0)
    throw DegenerateGeometryError("quickhull2d: all points coincide");

  // Lexicographic extremes are always hull vertices.
  auto lex_less = [&](int i, int j) {
    if (points(i, 0) != points(j, 0)) return points(i, 0) < points(j, 0);
    return points(i, 1) < points(j, 1);
  };
  int imin = 0, imax = 0;
  for (int i = 1; i < n; ++i) {
    if (lex_less(i, imin)) imin = i;
    if (lex_less(imax, i)) imax = i;
  }

  Builder builder{points, eps, {}};
  const Eigen::Vector2d pmin = builder.at(imin), pmax = builder.at(imax);
  const double base_len = (pmax - pmin).norm();

  std::vector<int> below, above;
  for (int i = 0; i < n; ++i) {
    if (i == imin || i == imax) continue;
    const double c = cross2(pmin, pmax, builder.at(i));
    if (c < -eps * base_len)
      below.push_back(i);
    else if (c > eps * base_len)
      above.push_back(i);
  }
  if (below.empty() && above.empty())
    throw DegenerateGeometryError("quickhull2d: all points are collinear");

  // CCW: lower chain from imin to imax, then upper chain back.
  builder.hull.push_back(imin);
  builder.expand(imin, imax, below);
  builder.hull.push_back(imax);
  builder.expand(imax, imin, above);

  ConvexHull2D hull;
  hull.source_count = n;
  hull.tolerance = eps;
  hull.vertices.resize(Eigen::Index(builder.hull.size()), 2);
  for (size_t k = 0; k < builder.hull.size(); ++k)
    hull.vertices.row(Eigen::Index(k)) = points.row(builder.hull[k]);
  return hull;
}

double hull_area(const ConvexHull2D& hull) {
  const auto& v = hull.vertices;
  const Eigen::Index m = v.rows();
  double twice = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    twice += v(i, 0) * v(j, 1) - v(j, 0) * v(i, 1);
  }
  return 0.5 * std::abs(twice);
}

double hull_perimeter(const ConvexHull2D& hull) {
  const auto& v = hull.vertices;
  const Eigen::Index m = v.rows();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    sum += (v.row((i + 1) % m) - v.row(i)).norm();
  return sum;
}

bool contains(const ConvexHull2D& hull, const Eigen::Vector2d& p) {
  const auto& v = hull.vertices;
  const Eigen::Index m = v.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Vector2d a = v.row(i), b = v.row((i + 1) % m);
    const double len = (b - a).norm();
    if (cross2(a, b, p) < -hull.tolerance * len) return false;
  }
  return true;
}

}  // namespace stationplot
