#include "stationplot/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace stationplot {

namespace {

struct Face {
  std::array<int, 3> v;    // point indices, CCW seen from outside
  std::array<int, 3> nbr;  // neighbor face across edge v[k] -> v[k+1]
  Eigen::Vector3d n;       // unit outward normal
  double d = 0.0;          // plane: n . x = d
  std::vector<int> outside;
  int furthest = -1;
  double furthest_dist = 0.0;
  bool alive = true;
};

struct Builder {
  const Eigen::MatrixXd& pts;
  double eps;
  Eigen::Vector3d interior;
  std::vector<Face> faces;

  Eigen::Vector3d at(int i) const { return pts.row(i).head<3>(); }

  double dist(const Face& f, int i) const { return f.n.dot(at(i)) - f.d; }

  int make_face(int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    Eigen::Vector3d n = (at(b) - at(a)).cross(at(c) - at(a));
    const double norm = n.norm();
    if (norm == 0.0)
      throw NumericError("quickhull3d: degenerate facet encountered");
    f.n = n / norm;
    f.d = f.n.dot(at(a));
    if (f.n.dot(interior) - f.d > 0) {  // keep the interior point below the plane
      std::swap(f.v[1], f.v[2]);
      f.n = -f.n;
      f.d = -f.d;
    }
    f.nbr = {-1, -1, -1};
    faces.push_back(std::move(f));
    return int(faces.size()) - 1;
  }

  void claim(Face& f, int i) {
    const double dd = dist(f, i);
    if (dd > eps) {
      f.outside.push_back(i);
      if (dd > f.furthest_dist) {
        f.furthest_dist = dd;
        f.furthest = i;
      }
    }
  }
};

}  // namespace

ConvexHull3D quickhull3d(const Eigen::Ref<const Eigen::MatrixXd>& points) {
  const Eigen::Index n = points.rows();
  if (points.cols() != 3) throw ValidationError("quickhull3d: points must be Nx3");
  if (n < 4)
    throw DegenerateGeometryError("quickhull3d: need at least 4 points, got " +
                                  std::to_string(n));
  if (!points.allFinite())
    throw ValidationError("quickhull3d: non-finite coordinate in input");

  const Eigen::Vector3d lo = points.colwise().minCoeff();
  const Eigen::Vector3d hi = points.colwise().maxCoeff();
  const double diag = (hi - lo).norm();
  const double eps = kHullEpsRel * diag;
  if (diag == 0.0)
    throw DegenerateGeometryError("quickhull3d: all points coincide");

  // Initial simplex from axis extremes: the farthest extreme pair, then the
  // point farthest from that line, then the point farthest from that plane.
  std::vector<int> extremes;
  for (int axis = 0; axis < 3; ++axis) {
    int lo_i = 0, hi_i = 0;
    for (int i = 1; i < n; ++i) {
      if (points(i, axis) < points(lo_i, axis)) lo_i = i;
      if (points(i, axis) > points(hi_i, axis)) hi_i = i;
    }
    extremes.push_back(lo_i);
    extremes.push_back(hi_i);
  }
  int i0 = extremes[0], i1 = extremes[1];
  double best = -1.0;
  for (int a : extremes)
    for (int b : extremes) {
      const double d2 = (points.row(a) - points.row(b)).squaredNorm();
      if (d2 > best) {
        best = d2;
        i0 = a;
        i1 = b;
      }
    }
  if (std::sqrt(best) <= eps)
    throw DegenerateGeometryError("quickhull3d: all points coincide");

  const Eigen::Vector3d p0 = points.row(i0), p1 = points.row(i1);
  const Eigen::Vector3d axis_u = (p1 - p0).normalized();
  int i2 = -1;
  best = eps;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d r = Eigen::Vector3d(points.row(i)) - p0;
    const double d = (r - r.dot(axis_u) * axis_u).norm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0) throw DegenerateGeometryError("quickhull3d: all points are collinear");

  const Eigen::Vector3d p2 = points.row(i2);
  const Eigen::Vector3d plane_n = (p1 - p0).cross(p2 - p0).normalized();
  int i3 = -1;
  best = eps;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(plane_n.dot(Eigen::Vector3d(points.row(i)) - p0));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0) throw DegenerateGeometryError("quickhull3d: all points are coplanar");

  Builder bld{points, eps, Eigen::Vector3d::Zero(), {}};
  bld.interior =
      (p0 + p1 + p2 + Eigen::Vector3d(points.row(i3))) / 4.0;
  bld.make_face(i0, i1, i2);
  bld.make_face(i0, i1, i3);
  bld.make_face(i0, i2, i3);
  bld.make_face(i1, i2, i3);

  // Neighbor links via directed-edge lookup: the twin of edge (u,v) is (v,u).
  auto link_all = [&](const std::vector<int>& ids) {
    std::map<std::pair<int, int>, int> edge_face;
    for (int id : ids)
      for (int k = 0; k < 3; ++k)
        edge_face[{bld.faces[id].v[k], bld.faces[id].v[(k + 1) % 3]}] = id;
    for (int id : ids)
      for (int k = 0; k < 3; ++k) {
        auto it = edge_face.find({bld.faces[id].v[(k + 1) % 3], bld.faces[id].v[k]});
        if (it != edge_face.end()) bld.faces[id].nbr[k] = it->second;
      }
  };
  link_all({0, 1, 2, 3});

  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    for (Face& f : bld.faces) {
      const size_t before = f.outside.size();
      bld.claim(f, i);
      if (f.outside.size() != before) break;
    }
  }

  std::vector<int> pending = {0, 1, 2, 3};
  while (!pending.empty()) {
    const int fid = pending.back();
    pending.pop_back();
    if (!bld.faces[fid].alive || bld.faces[fid].outside.empty()) continue;
    const int apex = bld.faces[fid].furthest;
    const Eigen::Vector3d papex = bld.at(apex);

    // Flood-fill the set of faces visible from the apex.
    std::vector<int> visible = {fid};
    std::vector<char> seen(bld.faces.size(), 0);
    seen[fid] = 1;
    for (size_t q = 0; q < visible.size(); ++q) {
      for (int k = 0; k < 3; ++k) {
        const int g = bld.faces[visible[q]].nbr[k];
        if (g < 0 || seen[g] || !bld.faces[g].alive) continue;
        if (bld.faces[g].n.dot(papex) - bld.faces[g].d > eps) {
          seen[g] = 1;
          visible.push_back(g);
        }
      }
    }

    // Horizon: edges of visible faces whose cross-neighbor survives.
    struct HorizonEdge {
      int u, v, outer;
    };
    std::vector<HorizonEdge> horizon;
    std::vector<int> orphans;
    for (int vid : visible) {
      Face& f = bld.faces[vid];
      for (int k = 0; k < 3; ++k) {
        const int g = f.nbr[k];
        if (g >= 0 && !seen[g]) horizon.push_back({f.v[k], f.v[(k + 1) % 3], g});
      }
      orphans.insert(orphans.end(), f.outside.begin(), f.outside.end());
      f.alive = false;
      f.outside.clear();
    }

    // One new face per horizon edge, keeping the winding of the dead face so
    // the normal points outward.
    std::map<std::pair<int, int>, int> new_edge;
    std::vector<int> created;
    for (const HorizonEdge& e : horizon) {
      const int nf = bld.make_face(e.u, e.v, apex);
      if (bld.faces[nf].v != std::array<int, 3>{e.u, e.v, apex})
        throw NumericError("quickhull3d: inconsistent facet orientation");
      created.push_back(nf);
      for (int k = 0; k < 3; ++k)
        new_edge[{bld.faces[nf].v[k], bld.faces[nf].v[(k + 1) % 3]}] = nf;
    }
    for (size_t h = 0; h < horizon.size(); ++h) {
      const HorizonEdge& e = horizon[h];
      Face& nf = bld.faces[created[h]];
      nf.nbr[0] = e.outer;
      Face& outer = bld.faces[e.outer];
      for (int k = 0; k < 3; ++k)
        if (outer.v[k] == e.v && outer.v[(k + 1) % 3] == e.u) outer.nbr[k] = created[h];
      nf.nbr[1] = new_edge.at({apex, e.v});
      nf.nbr[2] = new_edge.at({e.u, apex});
    }

    std::sort(orphans.begin(), orphans.end());
    for (int i : orphans) {
      if (i == apex) continue;
      for (int nf : created) {
        const size_t before = bld.faces[nf].outside.size();
        bld.claim(bld.faces[nf], i);
        if (bld.faces[nf].outside.size() != before) break;
      }
    }
    for (int nf : created)
      if (!bld.faces[nf].outside.empty()) pending.push_back(nf);
  }

  // Compact: vertices in ascending original-index order, facets re-indexed.
  std::vector<int> used;
  for (const Face& f : bld.faces)
    if (f.alive) used.insert(used.end(), f.v.begin(), f.v.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::map<int, int> remap;
  for (size_t k = 0; k < used.size(); ++k) remap[used[k]] = int(k);

  ConvexHull3D hull;
  hull.source_count = n;
  hull.tolerance = eps;
  hull.vertices.resize(Eigen::Index(used.size()), 3);
  for (size_t k = 0; k < used.size(); ++k) hull.vertices.row(Eigen::Index(k)) = points.row(used[k]);
  Eigen::Index alive_count = 0;
  for (const Face& f : bld.faces) alive_count += f.alive ? 1 : 0;
  hull.normals.resize(alive_count, 3);
  for (const Face& f : bld.faces) {
    if (!f.alive) continue;
    hull.facets.push_back({remap.at(f.v[0]), remap.at(f.v[1]), remap.at(f.v[2])});
    hull.normals.row(Eigen::Index(hull.facets.size()) - 1) = f.n;
  }
  return hull;
}

double hull_volume(const ConvexHull3D& hull) {
  double six_vol = 0.0;
  for (const auto& f : hull.facets) {
    const Eigen::Vector3d a = hull.vertices.row(f[0]);
    const Eigen::Vector3d b = hull.vertices.row(f[1]);
    const Eigen::Vector3d c = hull.vertices.row(f[2]);
    six_vol += a.dot(b.cross(c));
  }
  return std::abs(six_vol) / 6.0;
}

double hull_surface_area(const ConvexHull3D& hull) {
  double area = 0.0;
  for (const auto& f : hull.facets) {
    const Eigen::Vector3d a = hull.vertices.row(f[0]);
    const Eigen::Vector3d b = hull.vertices.row(f[1]);
    const Eigen::Vector3d c = hull.vertices.row(f[2]);
    area += 0.5 * (b - a).cross(c - a).norm();
  }
  return area;
}

bool contains(const ConvexHull3D& hull, const Eigen::Vector3d& p) {
  for (size_t k = 0; k < hull.facets.size(); ++k) {
    const Eigen::Vector3d n = hull.normals.row(Eigen::Index(k));
    const Eigen::Vector3d a = hull.vertices.row(hull.facets[k][0]);
    if (n.dot(p - a) > hull.tolerance) return false;
  }
  return true;
}

}  // namespace stationplot
