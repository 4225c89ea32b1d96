// Polygonal mesh container: vertices, counterclockwise cells, derived edge
// topology and per-cell geometric quantities (area, centroid, diameter).
//
// A mesh is immutable once build_topology() has run; all query methods are
// safe for concurrent reads.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vemwg {

using Vec2 = Eigen::Vector2d;

struct CellGeometry {
  double area = 0.0;
  Vec2 centroid = Vec2::Zero();
  double diameter = 0.0;  // max pairwise vertex distance
};

/// An edge in canonical orientation: v0 < v1 by global vertex index.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  int cell0 = -1;  // first incident cell
  int cell1 = -1;  // second incident cell, -1 on the boundary
  bool boundary() const { return cell1 < 0; }
};

namespace detail {

inline double signed_area(const std::vector<Vec2>& verts, const std::vector<int>& cell) {
  double a = 0.0;
  const int m = static_cast<int>(cell.size());
  for (int i = 0; i < m; ++i) {
    const Vec2& p = verts[cell[i]];
    const Vec2& q = verts[cell[(i + 1) % m]];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Proper or improper intersection of segments [a,b] and [c,d], excluding
// shared endpoints (used for the polygon simplicity check).
inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                               bool adjacent) {
  const double d1 = cross2(b - a, c - a);
  const double d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c);
  const double d4 = cross2(d - c, b - c);
  if (adjacent) {
    // Segments sharing one endpoint: only collinear overlap is a violation.
    if (std::abs(d1) > 0 || std::abs(d2) > 0) return false;
    // Collinear: overlap iff projections overlap beyond the shared point.
    const Vec2 dir = b - a;
    const double ta = 0.0, tb = dir.squaredNorm();
    const double tc = dir.dot(c - a), td = dir.dot(d - a);
    const double lo = std::min(tc, td), hi = std::max(tc, td);
    return hi > ta + 1e-14 * tb && lo < tb * (1.0 - 1e-14);
  }
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace detail

class PolygonMesh {
 public:
  PolygonMesh() = default;
  PolygonMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells)
      : vertices_(std::move(vertices)), cells_(std::move(cells)) {}

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<int>& cell(int c) const { return cells_[c]; }

  bool has_topology() const { return topology_built_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  double edge_length(int e) const {
    return (vertices_[edges_[e].v1] - vertices_[edges_[e].v0]).norm();
  }

  /// Edge ids of cell c, one per local edge (vertex i -> vertex i+1).
  const std::vector<int>& cell_edges(int c) const { return cell_edges_[c]; }
  /// +1 when the cell traverses edge e from canonical v0 to v1, else -1.
  const std::vector<int>& cell_edge_dirs(int c) const { return cell_edge_dirs_[c]; }

  const CellGeometry& geometry(int c) const { return geometry_[c]; }

  int n_boundary_edges() const {
    int n = 0;
    for (const auto& e : edges_) n += e.boundary() ? 1 : 0;
    return n;
  }

  bool vertex_on_boundary(int v) const { return vertex_on_boundary_[v]; }

  double mesh_size() const {
    double h = 0.0;
    for (const auto& g : geometry_) h = std::max(h, g.diameter);
    return h;
  }

  double total_area() const {
    double a = 0.0;
    for (const auto& g : geometry_) a += g.area;
    return a;
  }

  friend PolygonMesh build_topology(PolygonMesh mesh);

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> cell_edges_;
  std::vector<std::vector<int>> cell_edge_dirs_;
  std::vector<CellGeometry> geometry_;
  std::vector<bool> vertex_on_boundary_;
  bool topology_built_ = false;
};

/// Area, centroid and diameter of one polygon given as vertex positions.
inline CellGeometry compute_cell_geometry(const std::vector<Vec2>& verts,
                                          const std::vector<int>& cell) {
  const int m = static_cast<int>(cell.size());
  CellGeometry g;
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (int i = 0; i < m; ++i) {
    const Vec2& p = verts[cell[i]];
    const Vec2& q = verts[cell[(i + 1) % m]];
    const double w = detail::cross2(p, q);
    a += w;
    c += w * (p + q);
  }
  a *= 0.5;
  if (!(a > 0.0))
    throw std::invalid_argument("degenerate polygon: non-positive area " + std::to_string(a));
  g.area = a;
  g.centroid = c / (6.0 * a);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      g.diameter = std::max(g.diameter, (verts[cell[i]] - verts[cell[j]]).norm());
  return g;
}

/// Dedupe edges, attach incident cells, flag boundary entities and cache cell
/// geometry. Edges come out in canonical orientation (lower vertex index
/// first), sorted by (v0, v1) so the result is independent of cell order.
inline PolygonMesh build_topology(PolygonMesh mesh) {
  const auto& verts = mesh.vertices_;
  const auto& cells = mesh.cells_;
  const int nv = mesh.n_vertices();

  // Validate cells: index range, size, orientation, simplicity.
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = cells[c];
    if (cell.size() < 3)
      throw std::invalid_argument("cell " + std::to_string(c) + " has fewer than 3 vertices");
    for (int v : cell)
      if (v < 0 || v >= nv)
        throw std::invalid_argument("cell " + std::to_string(c) + " references vertex " +
                                    std::to_string(v) + " out of range [0," +
                                    std::to_string(nv) + ")");
    const double a = detail::signed_area(verts, cell);
    if (!(a > 0.0))
      throw std::invalid_argument("cell " + std::to_string(c) +
                                  " is not counterclockwise (signed area " + std::to_string(a) +
                                  ")");
    const int m = static_cast<int>(cell.size());
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
        if (detail::segments_intersect(verts[cell[i]], verts[cell[(i + 1) % m]], verts[cell[j]],
                                       verts[cell[(j + 1) % m]], adjacent))
          throw std::invalid_argument("cell " + std::to_string(c) +
                                      " is not a simple polygon (edges " + std::to_string(i) +
                                      " and " + std::to_string(j) + " intersect)");
      }
    }
  }

  // Collect unique edges in canonical orientation.
  std::map<std::pair<int, int>, std::vector<int>> incident;  // edge -> cells
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = cells[c];
    const int m = static_cast<int>(cell.size());
    for (int i = 0; i < m; ++i) {
      int a = cell[i], b = cell[(i + 1) % m];
      if (a == b)
        throw std::invalid_argument("cell " + std::to_string(c) + " repeats vertex " +
                                    std::to_string(a));
      auto key = std::minmax(a, b);
      incident[{key.first, key.second}].push_back(c);
    }
  }

  mesh.edges_.clear();
  std::map<std::pair<int, int>, int> edge_id;
  for (const auto& [key, cs] : incident) {
    if (cs.size() > 2)
      throw std::invalid_argument("non-manifold mesh: edge (" + std::to_string(key.first) + "," +
                                  std::to_string(key.second) + ") belongs to " +
                                  std::to_string(cs.size()) + " cells");
    Edge e;
    e.v0 = key.first;
    e.v1 = key.second;
    e.cell0 = cs[0];
    e.cell1 = cs.size() == 2 ? cs[1] : -1;
    edge_id[key] = static_cast<int>(mesh.edges_.size());
    mesh.edges_.push_back(e);
  }

  mesh.cell_edges_.assign(mesh.n_cells(), {});
  mesh.cell_edge_dirs_.assign(mesh.n_cells(), {});
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = cells[c];
    const int m = static_cast<int>(cell.size());
    for (int i = 0; i < m; ++i) {
      int a = cell[i], b = cell[(i + 1) % m];
      auto key = std::minmax(a, b);
      mesh.cell_edges_[c].push_back(edge_id.at({key.first, key.second}));
      mesh.cell_edge_dirs_[c].push_back(a < b ? +1 : -1);
    }
  }

  mesh.geometry_.clear();
  mesh.geometry_.reserve(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c)
    mesh.geometry_.push_back(compute_cell_geometry(verts, cells[c]));

  mesh.vertex_on_boundary_.assign(nv, false);
  for (const auto& e : mesh.edges_)
    if (e.boundary()) {
      mesh.vertex_on_boundary_[e.v0] = true;
      mesh.vertex_on_boundary_[e.v1] = true;
    }

  mesh.topology_built_ = true;
  return mesh;
}

/// Outward unit normal of local edge le of cell c (cells are CCW).
inline Vec2 outward_normal(const PolygonMesh& mesh, int c, int le) {
  const auto& cell = mesh.cell(c);
  const int m = static_cast<int>(cell.size());
  const Vec2 a = mesh.vertex(cell[le]);
  const Vec2 b = mesh.vertex(cell[(le + 1) % m]);
  Vec2 t = b - a;
  const double len = t.norm();
  return Vec2(t.y() / len, -t.x() / len);
}

}  // namespace vemwg
