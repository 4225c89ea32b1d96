// Text format for polygon meshes:
//   line 1: "polymesh 1"
//   line 2: <nv> <nc>
//   nv lines: x y
//   nc lines: <m> i0 i1 ... i(m-1)   (0-based, counterclockwise)
// Coordinates are written with 17 significant digits so read(write(mesh))
// reproduces vertices and connectivity exactly.

#pragma once

#include "vemwg/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace vemwg {

inline void write_mesh(const PolygonMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open mesh file for writing: " + path);
  out << "polymesh 1\n";
  out << mesh.n_vertices() << ' ' << mesh.n_cells() << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << '\n';
  for (const auto& cell : mesh.cells()) {
    out << cell.size();
    for (int v : cell) out << ' ' << v;
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Parse a mesh file and build its topology. Rejects malformed headers,
/// out-of-range vertex indices and clockwise cells.
inline PolygonMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "polymesh" || version != 1)
    throw std::runtime_error(path + ": not a polymesh-1 file");
  int nv = 0, nc = 0;
  if (!(in >> nv >> nc) || nv < 3 || nc < 1)
    throw std::runtime_error(path + ": bad vertex/cell counts");
  std::vector<Vec2> verts(nv);
  for (int i = 0; i < nv; ++i) {
    if (!(in >> verts[i].x() >> verts[i].y()))
      throw std::runtime_error(path + ": malformed vertex line " + std::to_string(i));
    if (!std::isfinite(verts[i].x()) || !std::isfinite(verts[i].y()))
      throw std::runtime_error(path + ": non-finite coordinate at vertex " + std::to_string(i));
  }
  std::vector<std::vector<int>> cells(nc);
  for (int c = 0; c < nc; ++c) {
    int m = 0;
    if (!(in >> m) || m < 3)
      throw std::runtime_error(path + ": bad vertex count in cell " + std::to_string(c));
    cells[c].resize(m);
    for (int i = 0; i < m; ++i) {
      if (!(in >> cells[c][i]))
        throw std::runtime_error(path + ": malformed cell line " + std::to_string(c));
      if (cells[c][i] < 0 || cells[c][i] >= nv)
        throw std::runtime_error(path + ": cell " + std::to_string(c) + " vertex index " +
                                 std::to_string(cells[c][i]) + " out of range [0," +
                                 std::to_string(nv) + ")");
    }
  }
  return build_topology(PolygonMesh(std::move(verts), std::move(cells)));
}

}  // namespace vemwg
