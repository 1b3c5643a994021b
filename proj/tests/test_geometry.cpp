#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "stationplot/hull.hpp"

using namespace stationplot;

namespace {

using Matrix2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using Matrix3 = Eigen::Matrix<double, Eigen::Dynamic, 3>;

Matrix2 points2d(std::initializer_list<std::pair<double, double>> pts) {
  Matrix2 m(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::Index i = 0;
  for (auto [x, y] : pts) {
    m(i, 0) = x;
    m(i, 1) = y;
    ++i;
  }
  return m;
}

// Brute-force half-plane oracle: a directed pair (i, j) is a hull edge iff
// every other point lies strictly left of it (we only feed clouds in general
// position). The hull vertex set is the union of edge endpoints.
std::set<std::pair<double, double>> oracle_hull_vertices(const Matrix2& pts) {
  const Eigen::Index n = pts.rows();
  std::set<std::pair<double, double>> verts;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      bool all_left = true;
      for (Eigen::Index k = 0; k < n && all_left; ++k) {
        if (k == i || k == j) continue;
        const double cross = (pts(j, 0) - pts(i, 0)) * (pts(k, 1) - pts(i, 1)) -
                             (pts(j, 1) - pts(i, 1)) * (pts(k, 0) - pts(i, 0));
        all_left = cross > 0.0;
      }
      if (all_left) {
        verts.insert({pts(i, 0), pts(i, 1)});
        verts.insert({pts(j, 0), pts(j, 1)});
      }
    }
  }
  return verts;
}

std::set<std::pair<double, double>> vertex_set(const ConvexHull2D& hull) {
  std::set<std::pair<double, double>> verts;
  for (Eigen::Index i = 0; i < hull.vertices.rows(); ++i) {
    verts.insert({hull.vertices(i, 0), hull.vertices(i, 1)});
  }
  return verts;
}

// Independent area oracle: triangulate as a fan from vertex 0 and sum
// one-triangle cross products.
double fan_area(const ConvexHull2D& hull) {
  double acc = 0.0;
  for (Eigen::Index i = 1; i + 1 < hull.vertices.rows(); ++i) {
    const double ax = hull.vertices(i, 0) - hull.vertices(0, 0);
    const double ay = hull.vertices(i, 1) - hull.vertices(0, 1);
    const double bx = hull.vertices(i + 1, 0) - hull.vertices(0, 0);
    const double by = hull.vertices(i + 1, 1) - hull.vertices(0, 1);
    acc += 0.5 * (ax * by - ay * bx);
  }
  return std::abs(acc);
}

Matrix2 random_cloud2d(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 10.0);
  Matrix2 m(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = dist(rng);
    m(i, 1) = dist(rng);
  }
  return m;
}

Matrix3 random_cloud3d(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 4.0);
  Matrix3 m(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) m(i, c) = dist(rng);
  }
  return m;
}

Matrix3 unit_cube() {
  Matrix3 m(8, 3);
  Eigen::Index i = 0;
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y)
      for (int z = 0; z <= 1; ++z) {
        m(i, 0) = x;
        m(i, 1) = y;
        m(i, 2) = z;
        ++i;
      }
  return m;
}

long edge_count(const ConvexHull3D& hull) {
  std::set<std::pair<int, int>> edges;
  for (const auto& f : hull.facets) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[static_cast<size_t>(e)];
      const int b = f[static_cast<size_t>((e + 1) % 3)];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  return static_cast<long>(edges.size());
}

}  // namespace

TEST_CASE("square with interior point: exact hull, CCW from lexicographic min") {
  const ConvexHull2D hull =
      quickhull2d(points2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}}));
  REQUIRE(hull.vertices.rows() == 4);
  const double want[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(hull.vertices(i, 0) == want[i][0]);
    CHECK(hull.vertices(i, 1) == want[i][1]);
  }
  CHECK(hull.source_count == 5);
}

TEST_CASE("degenerate 2D inputs raise the dedicated error") {
  CHECK_THROWS_AS(quickhull2d(points2d({{0, 0}, {1, 1}, {2, 2}})),
                  DegenerateGeometryError);
  CHECK_THROWS_AS(quickhull2d(points2d({{0, 0}, {1, 1}})), DegenerateGeometryError);
  CHECK_THROWS_AS(quickhull2d(points2d({{3, 3}, {3, 3}, {3, 3}, {3, 3}})),
                  DegenerateGeometryError);
}

TEST_CASE("collinear boundary points are excluded from the vertex list") {
  const ConvexHull2D hull = quickhull2d(
      points2d({{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 2}}));
  CHECK(hull.vertices.rows() == 4);  // midpoints of the edges dropped
}

TEST_CASE("quickhull2d equals the brute-force oracle on random clouds") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 3 + Eigen::Index(rng() % 98);
    const Matrix2 cloud = random_cloud2d(rng, n);
    ConvexHull2D hull;
    try {
      hull = quickhull2d(cloud);
    } catch (const DegenerateGeometryError&) {
      continue;  // 3-point draws can be nearly collinear
    }
    CHECK(vertex_set(hull) == oracle_hull_vertices(cloud));
    // Strict convexity of the output ring.
    const Eigen::Index m = hull.vertices.rows();
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto a = hull.vertices.row(i), b = hull.vertices.row((i + 1) % m),
                 c = hull.vertices.row((i + 2) % m);
      const double cross = (b(0) - a(0)) * (c(1) - a(1)) - (b(1) - a(1)) * (c(0) - a(0));
      CHECK(cross > hull.tolerance);
    }
    // Every input point is contained.
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(contains(hull, cloud.row(i).transpose()));
    }
  }
}

TEST_CASE("hull_area agrees with hand values and the fan oracle") {
  CHECK(hull_area(quickhull2d(points2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}}))) ==
        doctest::Approx(1.0));
  CHECK(hull_area(quickhull2d(points2d({{0, 0}, {4, 0}, {0, 3}}))) ==
        doctest::Approx(6.0));

  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 25; ++trial) {
    const ConvexHull2D hull = quickhull2d(random_cloud2d(rng, 30));
    const double a = hull_area(hull);
    CHECK(std::abs(a - fan_area(hull)) <= 1e-12 * a);
  }
}

TEST_CASE("hull_perimeter agrees with hand values") {
  CHECK(hull_perimeter(quickhull2d(points2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}}))) ==
        doctest::Approx(4.0));
  CHECK(hull_perimeter(quickhull2d(points2d({{0, 0}, {3, 0}, {3, 4}}))) ==
        doctest::Approx(12.0));

  // Regular hexagon with circumradius 1: perimeter = 6.
  Matrix2 hexagon(6, 2);
  for (Eigen::Index k = 0; k < 6; ++k) {
    const double angle = 2.0 * std::numbers::pi * double(k) / 6.0;
    hexagon(k, 0) = std::cos(angle);
    hexagon(k, 1) = std::sin(angle);
  }
  CHECK(hull_perimeter(quickhull2d(hexagon)) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("2D containment fixtures") {
  const ConvexHull2D hull = quickhull2d(points2d({{0, 0}, {4, 0}, {4, 4}, {0, 4}}));
  CHECK(contains(hull, Eigen::Vector2d(2, 2)));    // centroid
  CHECK(contains(hull, Eigen::Vector2d(0, 0)));    // vertex
  CHECK(contains(hull, Eigen::Vector2d(4, 2)));    // edge midpoint
  CHECK_FALSE(contains(hull, Eigen::Vector2d(4.06, 2)));  // 1% of bbox outside
  CHECK_FALSE(contains(hull, Eigen::Vector2d(-1, -1)));
}

TEST_CASE("adding an outside point strictly grows the area") {
  std::mt19937_64 rng(73);
  const Matrix2 cloud = random_cloud2d(rng, 40);
  const ConvexHull2D hull = quickhull2d(cloud);
  const double area = hull_area(hull);

  Matrix2 extended(cloud.rows() + 1, 2);
  extended.topRows(cloud.rows()) = cloud;
  extended(cloud.rows(), 0) = cloud.col(0).maxCoeff() * 2.0 + 5.0;
  extended(cloud.rows(), 1) = 0.0;
  CHECK(hull_area(quickhull2d(extended)) > area);
}

TEST_CASE("unit cube: counts, volume, surface area, Euler formula") {
  const ConvexHull3D hull = quickhull3d(unit_cube());
  CHECK(hull.vertices.rows() == 8);
  CHECK(hull.facets.size() == 12);
  CHECK(hull_volume(hull) == doctest::Approx(1.0));
  CHECK(hull_surface_area(hull) == doctest::Approx(6.0));
  CHECK(hull.vertices.rows() - edge_count(hull) +
            static_cast<long>(hull.facets.size()) ==
        2);
}

TEST_CASE("scaled cube volume follows s^3") {
  const Matrix3 cube2 = unit_cube() * 2.0;
  CHECK(hull_volume(quickhull3d(cube2)) == doctest::Approx(8.0));
}

TEST_CASE("regular tetrahedron from four cube corners") {
  Matrix3 tetra(4, 3);
  tetra << 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1;
  const ConvexHull3D hull = quickhull3d(tetra);
  CHECK(hull.vertices.rows() == 4);
  CHECK(hull.facets.size() == 4);
  CHECK(hull_volume(hull) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("degenerate 3D inputs raise the dedicated error") {
  Matrix3 coplanar(5, 3);
  coplanar << 0, 0, 1, 2, 0, 1, 0, 3, 1, 2, 3, 1, 1, 1, 1;
  CHECK_THROWS_AS(quickhull3d(coplanar), DegenerateGeometryError);

  Matrix3 collinear(4, 3);
  collinear << 0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3;
  CHECK_THROWS_AS(quickhull3d(collinear), DegenerateGeometryError);
}

TEST_CASE("sphere cloud: interior points never become vertices") {
  std::mt19937_64 rng(74);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix3 cloud(120, 3);
  for (Eigen::Index i = 0; i < 100; ++i) {
    Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
    cloud.row(i) = v.normalized();
  }
  for (Eigen::Index i = 100; i < 120; ++i) {  // strictly interior
    Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
    cloud.row(i) = v.normalized() * (0.5 * unit(rng));
  }
  const ConvexHull3D hull = quickhull3d(cloud);
  for (Eigen::Index v = 0; v < hull.vertices.rows(); ++v) {
    CHECK(hull.vertices.row(v).norm() > 0.9);
  }
  // All input points are inside, and Euler's formula holds.
  for (Eigen::Index i = 0; i < cloud.rows(); ++i) {
    CHECK(contains(hull, cloud.row(i).transpose()));
  }
  CHECK(hull.vertices.rows() - edge_count(hull) +
            static_cast<long>(hull.facets.size()) ==
        2);
}

TEST_CASE("3D hulls are watertight with outward normals") {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 10; ++trial) {
    const ConvexHull3D hull = quickhull3d(random_cloud3d(rng, 25));

    // Watertight: every directed edge appears exactly once across facets.
    std::set<std::pair<int, int>> directed;
    for (const auto& f : hull.facets) {
      for (int e = 0; e < 3; ++e) {
        const auto edge = std::pair{f[static_cast<size_t>(e)],
                                    f[static_cast<size_t>((e + 1) % 3)]};
        CHECK(directed.insert(edge).second);
      }
    }
    for (const auto& [a, b] : directed) {
      CHECK(directed.count({b, a}) == 1);
    }

    // Outward normals: the centroid sits strictly behind every facet plane.
    const Eigen::RowVector3d centroid = hull.vertices.colwise().mean();
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
      const Eigen::RowVector3d a = hull.vertices.row(hull.facets[f][0]);
      CHECK(hull.normals.row(static_cast<Eigen::Index>(f)).dot(centroid - a) < 0.0);
    }

    CHECK(hull.vertices.rows() - edge_count(hull) +
              static_cast<long>(hull.facets.size()) ==
          2);
  }
}

TEST_CASE("Monte-Carlo volume oracle on a random cloud") {
  std::mt19937_64 rng(76);
  const Matrix3 cloud = random_cloud3d(rng, 20);
  const ConvexHull3D hull = quickhull3d(cloud);
  const double volume = hull_volume(hull);

  const Eigen::RowVector3d lo = cloud.colwise().minCoeff();
  const Eigen::RowVector3d hi = cloud.colwise().maxCoeff();
  std::uniform_real_distribution<double> ux(lo(0), hi(0)), uy(lo(1), hi(1)),
      uz(lo(2), hi(2));
  const long samples = 200000;
  long inside = 0;
  for (long s = 0; s < samples; ++s) {
    if (contains(hull, Eigen::Vector3d(ux(rng), uy(rng), uz(rng)))) ++inside;
  }
  const double box = (hi - lo).prod();
  const double estimate = box * double(inside) / double(samples);
  CHECK(std::abs(estimate - volume) <= 0.05 * volume);
}

TEST_CASE("3D containment fixtures") {
  const ConvexHull3D hull = quickhull3d(unit_cube());
  CHECK(contains(hull, Eigen::Vector3d(0.5, 0.5, 0.5)));
  CHECK(contains(hull, Eigen::Vector3d(0, 0, 0)));
  CHECK_FALSE(contains(hull, Eigen::Vector3d(0.5, 0.5, 1.02)));
}

TEST_CASE("adding an outside point strictly grows the volume") {
  std::mt19937_64 rng(77);
  const Matrix3 cloud = random_cloud3d(rng, 15);
  const double volume = hull_volume(quickhull3d(cloud));
  Matrix3 extended(cloud.rows() + 1, 3);
  extended.topRows(cloud.rows()) = cloud;
  extended.row(cloud.rows()) =
      Eigen::RowVector3d(cloud.col(0).maxCoeff() * 2.0 + 3.0, 0.0, 0.0);
  CHECK(hull_volume(quickhull3d(extended)) > volume);
}

TEST_CASE("area/perimeter/volume scale as s^2, s, s^3; hulls shift-invariant") {
  std::mt19937_64 rng(78);
  const Matrix2 cloud = random_cloud2d(rng, 35);
  const ConvexHull2D base = quickhull2d(cloud);
  const double s = 3.7;

  Matrix2 scaled = cloud * s;
  scaled.col(0).array() += 100.0;
  scaled.col(1).array() -= 55.0;
  const ConvexHull2D moved = quickhull2d(scaled);
  CHECK(hull_area(moved) == doctest::Approx(hull_area(base) * s * s).epsilon(1e-9));
  CHECK(hull_perimeter(moved) ==
        doctest::Approx(hull_perimeter(base) * s).epsilon(1e-9));

  const Matrix3 cloud3 = random_cloud3d(rng, 18);
  const double v = hull_volume(quickhull3d(cloud3));
  CHECK(hull_volume(quickhull3d((cloud3 * s).eval())) ==
        doctest::Approx(v * s * s * s).epsilon(1e-9));
}
