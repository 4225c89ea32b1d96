// Structured mesh generators on the unit square (and the L-shaped domain):
// square grids, a staggered hexagon-dominant tiling, seeded perturbed grids.

#pragma once

#include "vemwg/mesh.hpp"

#include <cstdint>
#include <random>

namespace vemwg {

enum class MeshKind { square, hexagon_dominant, perturbed_square, lshape };

struct GeneratorOptions {
  std::uint64_t seed = 0;
  double perturbation = 0.1;  // relative to cell size, must stay <= 0.2
};

namespace detail {

// Deterministic uniform in [-1,1] (independent of libstdc++ distributions).
inline double symmetric_uniform(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

inline PolygonMesh square_grid(int n) {
  std::vector<Vec2> verts;
  verts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.emplace_back(double(i) / n, double(j) / n);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return PolygonMesh(std::move(verts), std::move(cells));
}

// Staggered-brick tiling with chevron interfaces: interior rows are hexagons,
// domain-adjacent cells degrade to pentagons and quadrilaterals.
inline PolygonMesh hexagon_grid(int n) {
  const double d = 0.15 / n;  // chevron amplitude, keeps cells star-shaped
  std::vector<Vec2> verts;
  // vertex_at(l, m): breakpoint m (0..2n) on interface l (0..n); -1 if absent
  std::vector<std::vector<int>> index(n + 1, std::vector<int>(2 * n + 1, -1));
  auto x_of = [n](int m) { return double(m) / (2 * n); };
  for (int l = 0; l <= n; ++l) {
    const bool flat = (l == 0 || l == n);
    const double y = double(l) / n;
    for (int m = 0; m <= 2 * n; ++m) {
      bool present;
      if (flat) {
        // Keep only the corners used by the adjacent row (skip flat midpoints).
        const int row = (l == 0) ? 0 : n - 1;
        const bool odd_row = (row % 2 == 1);
        present = odd_row ? (m % 2 == 1 || m == 0 || m == 2 * n) : (m % 2 == 0);
      } else {
        present = true;
      }
      if (!present) continue;
      const double dy = flat ? 0.0 : (m % 2 == 1 ? d : -d);
      index[l][m] = static_cast<int>(verts.size());
      verts.emplace_back(x_of(m), y + dy);
    }
  }

  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j) {
    const bool odd_row = (j % 2 == 1);
    std::vector<std::pair<int, int>> spans;  // [m_left, m_right] per cell
    if (!odd_row) {
      for (int i = 0; i < n; ++i) spans.emplace_back(2 * i, 2 * i + 2);
    } else {
      spans.emplace_back(0, 1);
      for (int i = 1; i < n; ++i) spans.emplace_back(2 * i - 1, 2 * i + 1);
      spans.emplace_back(2 * n - 1, 2 * n);
    }
    for (auto [ml, mr] : spans) {
      std::vector<int> cell;
      for (int m = ml; m <= mr; ++m)  // bottom, left to right
        if (index[j][m] >= 0) cell.push_back(index[j][m]);
      for (int m = mr; m >= ml; --m)  // top, right to left
        if (index[j + 1][m] >= 0) cell.push_back(index[j + 1][m]);
      cells.push_back(std::move(cell));
    }
  }
  return PolygonMesh(std::move(verts), std::move(cells));
}

inline PolygonMesh lshape_grid(int n) {
  if (n % 2 != 0)
    throw std::invalid_argument("lshape generator requires even n, got " + std::to_string(n));
  PolygonMesh full = square_grid(n);
  // Keep cells whose center lies in [0,1]^2 \ (0.5,1)x(0.5,1).
  std::vector<std::vector<int>> cells;
  for (const auto& cell : full.cells()) {
    Vec2 c = Vec2::Zero();
    for (int v : cell) c += full.vertex(v);
    c /= double(cell.size());
    if (!(c.x() > 0.5 && c.y() > 0.5)) cells.push_back(cell);
  }
  // Compact unused vertices.
  std::vector<int> remap(full.n_vertices(), -1);
  std::vector<Vec2> verts;
  for (auto& cell : cells)
    for (int& v : cell) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(verts.size());
        verts.push_back(full.vertex(v));
      }
      v = remap[v];
    }
  return PolygonMesh(std::move(verts), std::move(cells));
}

}  // namespace detail

/// Build one of the structured families covering [0,1]^2 (lshape: minus the
/// upper-right quadrant). Deterministic for a fixed seed.
inline PolygonMesh generate_structured(MeshKind kind, int n, GeneratorOptions opts = {}) {
  if (n < 1) throw std::invalid_argument("subdivision count must be >= 1, got " + std::to_string(n));
  switch (kind) {
    case MeshKind::square:
      return build_topology(detail::square_grid(n));
    case MeshKind::hexagon_dominant:
      return build_topology(detail::hexagon_grid(n));
    case MeshKind::lshape:
      return build_topology(detail::lshape_grid(n));
    case MeshKind::perturbed_square: {
      if (!(opts.perturbation >= 0.0 && opts.perturbation <= 0.2))
        throw std::invalid_argument("perturbation magnitude must be in [0, 0.2], got " +
                                    std::to_string(opts.perturbation));
      PolygonMesh grid = detail::square_grid(n);
      std::vector<Vec2> verts = grid.vertices();
      std::mt19937_64 rng(opts.seed);
      const double amp = opts.perturbation / n;
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
          const double dx = amp * detail::symmetric_uniform(rng);
          const double dy = amp * detail::symmetric_uniform(rng);
          if (i > 0 && i < n && j > 0 && j < n) {
            verts[j * (n + 1) + i].x() += dx;
            verts[j * (n + 1) + i].y() += dy;
          }
        }
      // build_topology rejects any cell the perturbation made non-simple.
      return build_topology(PolygonMesh(std::move(verts), grid.cells()));
    }
  }
  throw std::invalid_argument("unknown mesh kind");
}

inline MeshKind mesh_kind_from_string(const std::string& s) {
  if (s == "square") return MeshKind::square;
  if (s == "hexagon-dominant") return MeshKind::hexagon_dominant;
  if (s == "perturbed-square") return MeshKind::perturbed_square;
  if (s == "lshape") return MeshKind::lshape;
  throw std::invalid_argument("unknown mesh kind: " + s);
}

}  // namespace vemwg
