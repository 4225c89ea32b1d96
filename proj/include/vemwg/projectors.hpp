// Local projection operators computable from dofs alone.
//
//   h1_projector      energy projection onto P_k: (grad Pi v, grad p) =
//                     (grad v, grad p), right side evaluated through
//                     -(v, Lap p) + <v, n.grad p> so only dof data enters;
//                     the constant mode is pinned by preserving the dof
//                     average.
//   moment_projector  on the enlarged space: the unique P_k polynomial
//                     matching all cell moments up to order k.
//   l2_*_projection   plain L2 projections of evaluable functions.
//
// Projectors are materialized as explicit matrices: `star` maps local dofs to
// scaled-monomial coefficients, `dof` = D * star acts on dof vectors.

#pragma once

#include "vemwg/dofs.hpp"

namespace vemwg {

struct LocalProjector {
  Eigen::MatrixXd star;  // n_poly x n_dofs
  Eigen::MatrixXd dof;   // n_dofs x n_dofs
};

namespace detail {

// Boundary pairing rows: row alpha accumulates <trace(.), grad m_alpha . n>
// over the cell boundary, expressed on the local dof vector. For the
// nonconforming family the moment-matched trace is exact here because
// grad m_alpha . n is a polynomial of degree <= k-1 on each edge.
inline Eigen::MatrixXd boundary_flux_pairing(const PolygonMesh& mesh, int c,
                                             const SpaceSpec& spec,
                                             const ScaledMonomialBasis& basis) {
  const int k = spec.degree;
  const LocalDofSet set = local_dofs(mesh, c, spec);
  const int trace_deg = spec.family == Family::conforming ? k : k - 1;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(basis.size(), set.size());
  const int m = static_cast<int>(mesh.cell(c).size());
  for (int le = 0; le < m; ++le) {
    const int e = mesh.cell_edges(c)[le];
    const Eigen::MatrixXd T = spec.family == Family::conforming
                                  ? edge_trace_matrix(mesh, c, spec, le)
                                  : nc_edge_trace_matrix(mesh, c, spec, le);
    const Vec2 n = outward_normal(mesh, c, le);
    const EdgeQuadratureRule rule = edge_quadrature(mesh, e, 2 * k + 1);
    for (int q = 0; q < rule.tau.size(); ++q) {
      const Vec2 x = edge_point(mesh, e, rule.tau[q]);
      const Eigen::VectorXd flux = basis.grad(x).transpose() * n;
      const Eigen::VectorXd trace_row =
          T.transpose() * edge_monomial_eval(trace_deg, rule.tau[q]);
      B.noalias() += rule.weights[q] * flux * trace_row.transpose();
    }
  }
  return B;
}

}  // namespace detail

/// Right-hand-side rows of the Pi-nabla system (before constant fixing):
/// row alpha applies -(., Lap m_alpha) + <., grad m_alpha . n> to local dofs.
inline Eigen::MatrixXd h1_projector_rhs(const PolygonMesh& mesh, int c, const SpaceSpec& spec) {
  const int k = spec.degree;
  if (spec.cell_moment_degree < k - 2)
    throw std::logic_error("H1 projector needs cell moments up to order k-2");
  const ScaledMonomialBasis basis(mesh, c, k);
  const LocalDofSet set = local_dofs(mesh, c, spec);
  Eigen::MatrixXd B = detail::boundary_flux_pairing(mesh, c, spec, basis);
  // -(v, Lap m_alpha): Lap m_alpha expands exactly into monomials of degree
  // <= k-2, whose pairings with v are |K| times the cell-moment dofs.
  const Eigen::MatrixXd L = basis.laplacian_coefficients();
  const double area = mesh.geometry(c).area;
  const int n_low = poly_dim(k - 2);
  for (int a = 0; a < basis.size(); ++a)
    for (int s = 0; s < n_low; ++s)
      if (L(s, a) != 0.0) B(a, set.moment_offset() + s) -= area * L(s, a);
  return B;
}

inline LocalProjector h1_projector(const PolygonMesh& mesh, int c, const SpaceSpec& spec) {
  const int k = spec.degree;
  const Eigen::MatrixXd D = dof_matrix(mesh, c, spec, k);
  Eigen::MatrixXd G = monomial_stiffness_matrix(mesh, c, k);
  Eigen::MatrixXd B = h1_projector_rhs(mesh, c, spec);
  // Constant mode: the projection preserves the dof average.
  G.row(0) = D.colwise().sum();
  B.row(0).setOnes();
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  if (!lu.isInvertible())
    throw std::runtime_error("singular H1-projector system on cell " + std::to_string(c));
  LocalProjector proj;
  proj.star = lu.solve(B);
  proj.dof = D * proj.star;
  return proj;
}

/// Moment projector on the enlarged space: matches all cell moments <= k.
inline LocalProjector moment_projector(const PolygonMesh& mesh, int c, const SpaceSpec& spec) {
  if (!spec.enlarged())
    throw std::logic_error("moment projector requires the enlarged space (cell moments up to k)");
  const int k = spec.degree;
  const LocalDofSet set = local_dofs(mesh, c, spec);
  const Eigen::MatrixXd H = monomial_mass_matrix(mesh, c, k);
  const double area = mesh.geometry(c).area;
  LocalProjector proj;
  proj.star = Eigen::MatrixXd::Zero(poly_dim(k), set.size());
  proj.star.middleCols(set.moment_offset(), set.n_moment) =
      area * H.llt().solve(Eigen::MatrixXd::Identity(poly_dim(k), poly_dim(k)));
  proj.dof = dof_matrix(mesh, c, spec, k) * proj.star;
  return proj;
}

/// Coefficients of the L2 projection of f onto P_deg(K). The quadrature
/// degree may be raised above the 2*deg+2 default when f is not polynomial.
template <typename F>
Eigen::VectorXd l2_cell_projection(const PolygonMesh& mesh, int c, int deg, F&& f,
                                   int quad_degree = -1) {
  const ScaledMonomialBasis basis(mesh, c, deg);
  const QuadratureRule rule =
      polygon_quadrature(mesh, c, quad_degree < 0 ? 2 * deg + 2 : quad_degree);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.size());
  for (int q = 0; q < rule.weights.size(); ++q) {
    const Vec2 x = rule.points.col(q);
    rhs += rule.weights[q] * f(x) * basis.eval(x);
  }
  return monomial_mass_matrix(mesh, c, deg).llt().solve(rhs);
}

/// Coefficients of the L2 projection of g onto P_deg(e), canonical parameter.
template <typename F>
Eigen::VectorXd l2_edge_projection(const PolygonMesh& mesh, int e, int deg, F&& g) {
  const EdgeQuadratureRule rule = edge_quadrature(2 * deg + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(deg + 1);
  for (int q = 0; q < rule.tau.size(); ++q)
    rhs += rule.weights[q] * g(edge_point(mesh, e, rule.tau[q])) *
           edge_monomial_eval(deg, rule.tau[q]);
  return edge_monomial_mass_matrix(deg).llt().solve(rhs);
}

}  // namespace vemwg
