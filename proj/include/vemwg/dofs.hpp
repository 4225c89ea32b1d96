// Degrees of freedom for the three space families:
//   conforming      vertex values + edge moments <= k-2 + cell moments
//   nonconforming   edge moments <= k-1 + cell moments (no vertex dofs)
// with cell moments up to k-2 (plain space) or up to k (enlarged space,
// identical to the weak Galerkin pair {v0, vb} through the dofs).
//
// Edge moments are taken against scaled 1D monomials in the canonical
// arclength parameter, so both cells incident to an edge see the same
// functionals. Vertex dofs are plain point values; moment dofs carry the
// |e|^-1 and |K|^-1 scalings of their definitions.

#pragma once

#include "vemwg/monomial.hpp"

namespace vemwg {

enum class Family { conforming, nonconforming };

struct SpaceSpec {
  Family family = Family::conforming;
  int degree = 1;             // polynomial degree k >= 1
  int cell_moment_degree = -1;  // -1: no cell moments (skeleton only)

  bool enlarged() const { return cell_moment_degree == degree; }
  bool has_vertex_dofs() const { return family == Family::conforming; }
  int edge_moment_max() const {
    return family == Family::conforming ? degree - 2 : degree - 1;
  }
  int edge_moments_per_edge() const { return edge_moment_max() + 1; }
  int cell_moments_per_cell() const { return poly_dim(cell_moment_degree); }

  bool operator==(const SpaceSpec&) const = default;
};

inline SpaceSpec conforming_space(int k, bool enlarged) {
  return SpaceSpec{Family::conforming, k, enlarged ? k : k - 2};
}
inline SpaceSpec nonconforming_space(int k, bool enlarged) {
  return SpaceSpec{Family::nonconforming, k, enlarged ? k : k - 2};
}

enum class DofKind { vertex, edge_moment, cell_moment };

struct DofDescriptor {
  DofKind kind;
  int entity;  // global vertex/edge/cell index
  int index;   // moment order (edge) or monomial index (cell); 0 for vertex

  bool operator==(const DofDescriptor&) const = default;
};

/// Dofs of one cell in deterministic local order: vertices in traversal
/// order, then per-edge moments (traversal order, increasing moment order),
/// then cell moments in graded lexicographic order.
struct LocalDofSet {
  int cell = -1;
  SpaceSpec spec;
  std::vector<DofDescriptor> dofs;
  int n_vertex = 0;
  int n_edge = 0;
  int n_moment = 0;

  int size() const { return static_cast<int>(dofs.size()); }
  int n_boundary() const { return n_vertex + n_edge; }  // the chi_b block
  int moment_offset() const { return n_vertex + n_edge; }
};

inline LocalDofSet local_dofs(const PolygonMesh& mesh, int c, const SpaceSpec& spec) {
  if (spec.degree < 1) throw std::invalid_argument("space degree must be >= 1");
  LocalDofSet set;
  set.cell = c;
  set.spec = spec;
  const auto& cell = mesh.cell(c);
  const int m = static_cast<int>(cell.size());
  if (spec.has_vertex_dofs()) {
    for (int v : cell) set.dofs.push_back({DofKind::vertex, v, 0});
    set.n_vertex = m;
  }
  for (int le = 0; le < m; ++le) {
    const int e = mesh.cell_edges(c)[le];
    for (int j = 0; j <= spec.edge_moment_max(); ++j)
      set.dofs.push_back({DofKind::edge_moment, e, j});
  }
  set.n_edge = m * spec.edge_moments_per_edge();
  for (int s = 0; s < spec.cell_moments_per_cell(); ++s)
    set.dofs.push_back({DofKind::cell_moment, c, s});
  set.n_moment = spec.cell_moments_per_cell();
  return set;
}

/// chi(p) for a polynomial given by coefficients in the cell's scaled
/// monomial basis of degree basis_degree (any degree >= 0).
inline Eigen::VectorXd chi_of_polynomial(const PolygonMesh& mesh, int c, const SpaceSpec& spec,
                                         int basis_degree, const Eigen::VectorXd& coeffs) {
  const LocalDofSet set = local_dofs(mesh, c, spec);
  const ScaledMonomialBasis basis(mesh, c, basis_degree);
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("coefficient vector does not match basis size");
  Eigen::VectorXd values(set.size());
  const double area = mesh.geometry(c).area;

  // Cell-moment quadrature shared across moments.
  QuadratureRule cell_rule;
  if (set.n_moment > 0)
    cell_rule = polygon_quadrature(mesh, c, basis_degree + spec.cell_moment_degree + 2);
  ScaledMonomialBasis moment_basis(mesh, c, std::max(spec.cell_moment_degree, 0));

  int i = 0;
  for (; i < set.n_vertex; ++i)
    values[i] = basis.eval(mesh.vertex(set.dofs[i].entity)).dot(coeffs);
  for (; i < set.moment_offset(); ++i) {
    const DofDescriptor& d = set.dofs[i];
    const EdgeQuadratureRule rule =
        edge_quadrature(basis_degree + spec.edge_moment_max() + 1);
    double val = 0.0;
    for (int q = 0; q < rule.tau.size(); ++q) {
      const Vec2 x = edge_point(mesh, d.entity, rule.tau[q]);
      val += rule.weights[q] * edge_monomial_eval(d.index, rule.tau[q])[d.index] *
             basis.eval(x).dot(coeffs);
    }
    values[i] = val;  // |e|^-1 scaling cancels against the arclength measure
  }
  if (set.n_moment > 0) {
    Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(set.n_moment, basis.size());
    for (int q = 0; q < cell_rule.weights.size(); ++q) {
      const Vec2 x = cell_rule.points.col(q);
      mixed.noalias() +=
          cell_rule.weights[q] * moment_basis.eval(x) * basis.eval(x).transpose();
    }
    values.segment(set.moment_offset(), set.n_moment) = mixed * coeffs / area;
  }
  return values;
}

/// D matrix: column alpha holds the dofs of monomial m_alpha, alpha ranging
/// over the scaled monomials of degree <= poly_degree.
inline Eigen::MatrixXd dof_matrix(const PolygonMesh& mesh, int c, const SpaceSpec& spec,
                                  int poly_degree) {
  const int n = poly_dim(poly_degree);
  Eigen::MatrixXd D;
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[a] = 1.0;
    const Eigen::VectorXd col = chi_of_polynomial(mesh, c, spec, poly_degree, e);
    if (a == 0) D.resize(col.size(), n);
    D.col(a) = col;
  }
  return D;
}

/// Trace reconstruction on local edge le for the conforming family: maps the
/// local dof vector to the coefficients of v|_e in P_k(e), canonical
/// parametrization. The trace is pinned by the two endpoint values and the
/// edge moments of order <= k-2.
inline Eigen::MatrixXd edge_trace_matrix(const PolygonMesh& mesh, int c, const SpaceSpec& spec,
                                         int le) {
  if (spec.family != Family::conforming)
    throw std::logic_error("edge_trace_matrix is defined for the conforming family only");
  const int k = spec.degree;
  const LocalDofSet set = local_dofs(mesh, c, spec);
  const auto& cell = mesh.cell(c);
  const int m = static_cast<int>(cell.size());
  const int e = mesh.cell_edges(c)[le];
  const Edge& edge = mesh.edge(e);

  Eigen::MatrixXd M(k + 1, k + 1);
  M.row(0) = edge_monomial_eval(k, 0.0).transpose();
  M.row(1) = edge_monomial_eval(k, 1.0).transpose();
  const Eigen::MatrixXd mass = edge_monomial_mass_matrix(k);
  for (int j = 0; j <= k - 2; ++j) M.row(2 + j) = mass.row(j).head(k + 1);

  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(k + 1, set.size());
  auto local_vertex = [&](int v) {
    for (int i = 0; i < m; ++i)
      if (cell[i] == v) return i;
    throw std::logic_error("edge vertex not in cell");
  };
  sel(0, local_vertex(edge.v0)) = 1.0;
  sel(1, local_vertex(edge.v1)) = 1.0;
  const int base = set.n_vertex + le * spec.edge_moments_per_edge();
  for (int j = 0; j <= k - 2; ++j) sel(2 + j, base + j) = 1.0;

  return M.fullPivLu().solve(sel);
}

/// Same for the nonconforming family: v|_e in P_{k-1}(e) is pinned by its k
/// edge moments.
inline Eigen::MatrixXd nc_edge_trace_matrix(const PolygonMesh& mesh, int c,
                                            const SpaceSpec& spec, int le) {
  if (spec.family != Family::nonconforming)
    throw std::logic_error("nc_edge_trace_matrix requires the nonconforming family");
  const int k = spec.degree;
  const LocalDofSet set = local_dofs(mesh, c, spec);
  const Eigen::MatrixXd mass = edge_monomial_mass_matrix(k - 1);
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(k, set.size());
  const int base = set.n_vertex + le * spec.edge_moments_per_edge();
  for (int j = 0; j < k; ++j) sel(j, base + j) = 1.0;
  return mass.llt().solve(sel);
}

/// Local-to-global dof numbering: all vertex dofs (by vertex index), then all
/// edge dofs (by edge index, then moment order), then all cell moments.
class DofMap {
 public:
  DofMap() = default;

  const SpaceSpec& spec() const { return spec_; }
  int n_global() const { return n_global_; }
  const std::vector<int>& cell_dofs(int c) const { return cell_dofs_[c]; }
  const DofDescriptor& descriptor(int g) const { return descriptors_[g]; }
  bool on_boundary(int g) const { return boundary_[g]; }
  int n_boundary() const {
    int n = 0;
    for (bool b : boundary_) n += b ? 1 : 0;
    return n;
  }
  /// First global index of the cell-moment block.
  int cell_moment_offset() const { return cell_moment_offset_; }
  int global_index(const DofDescriptor& d) const {
    switch (d.kind) {
      case DofKind::vertex:
        return d.entity;
      case DofKind::edge_moment:
        return vertex_block_ + d.entity * edge_per_ + d.index;
      case DofKind::cell_moment:
        return cell_moment_offset_ + d.entity * cell_per_ + d.index;
    }
    return -1;
  }

  friend DofMap build_global_map(const PolygonMesh& mesh, const SpaceSpec& spec);

 private:
  SpaceSpec spec_;
  int n_global_ = 0;
  int vertex_block_ = 0;
  int cell_moment_offset_ = 0;
  int edge_per_ = 0;
  int cell_per_ = 0;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<DofDescriptor> descriptors_;
  std::vector<bool> boundary_;
};

inline DofMap build_global_map(const PolygonMesh& mesh, const SpaceSpec& spec) {
  DofMap map;
  map.spec_ = spec;
  map.edge_per_ = spec.edge_moments_per_edge();
  map.cell_per_ = spec.cell_moments_per_cell();
  map.vertex_block_ = spec.has_vertex_dofs() ? mesh.n_vertices() : 0;
  map.cell_moment_offset_ = map.vertex_block_ + mesh.n_edges() * map.edge_per_;
  map.n_global_ = map.cell_moment_offset_ + mesh.n_cells() * map.cell_per_;

  map.descriptors_.resize(map.n_global_);
  map.boundary_.assign(map.n_global_, false);
  if (spec.has_vertex_dofs())
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      map.descriptors_[v] = {DofKind::vertex, v, 0};
      map.boundary_[v] = mesh.vertex_on_boundary(v);
    }
  for (int e = 0; e < mesh.n_edges(); ++e)
    for (int j = 0; j < map.edge_per_; ++j) {
      const int g = map.vertex_block_ + e * map.edge_per_ + j;
      map.descriptors_[g] = {DofKind::edge_moment, e, j};
      map.boundary_[g] = mesh.edge(e).boundary();
    }
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int s = 0; s < map.cell_per_; ++s) {
      const int g = map.cell_moment_offset_ + c * map.cell_per_ + s;
      map.descriptors_[g] = {DofKind::cell_moment, c, s};
    }

  map.cell_dofs_.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const LocalDofSet set = local_dofs(mesh, c, spec);
    map.cell_dofs_[c].reserve(set.size());
    for (const DofDescriptor& d : set.dofs) map.cell_dofs_[c].push_back(map.global_index(d));
  }
  return map;
}

/// Basis of the moment annihilator inside P_k: polynomials of degree k whose
/// cell moments of order <= k-2 vanish, built by mass-orthogonalizing the
/// degree k-1 and k monomials against P_{k-2}. Columns are P_k coefficient
/// vectors; H is the cell's degree-k monomial mass matrix.
inline Eigen::MatrixXd annihilator_basis(int k, const Eigen::MatrixXd& H) {
  const int n_k = poly_dim(k);
  const int n_low = poly_dim(k - 2);
  const int n2 = n_k - n_low;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n_k, n2);
  if (n_low == 0) {
    Q.setIdentity();
    return Q;
  }
  const Eigen::MatrixXd Hll = H.topLeftCorner(n_low, n_low);
  const Eigen::MatrixXd Hlh = H.topRightCorner(n_low, n2);
  const Eigen::MatrixXd beta = Hll.llt().solve(Hlh);
  Q.topRows(n_low) = -beta;
  Q.bottomRows(n2).setIdentity();
  return Q;
}

/// Dual basis of the moments of order <= k-2 inside P_{k-2}: column s holds
/// the P_{k-2} coefficients of the polynomial whose moment vector is e_s.
/// Hlow is the degree-(k-2) monomial mass matrix, area the cell area.
inline Eigen::MatrixXd moment_dual_basis(const Eigen::MatrixXd& Hlow, double area) {
  const int n = static_cast<int>(Hlow.rows());
  return area * Hlow.llt().solve(Eigen::MatrixXd::Identity(n, n));
}

}  // namespace vemwg
