// Local bilinear and linear forms for the six methods.
//
// Stiffness comes from two independent pipelines that the verification
// harness compares entrywise:
//   - projection route: a(Pi v, Pi w) through the H1 projector,
//   - weak-gradient route: (grad_w v, grad_w w) with the weak gradient into
//     grad P_k (modified) or [P_{k-1}]^2 (legacy), assembled from the
//     explicit polynomial representation of {v0, vb}.
//
// Stabilizations:
//   dofi         dof residual of the H1 projector (plain VEM spaces)
//   tilde        dof residual of the moment projector (enlarged spaces)
//   boundary     chi_b(u_b - u_0) pairing, conforming WG
//   nc_boundary  same with edge-moment chi_b, nonconforming WG
// plus scaled continuous-form alternates used for spectral cross-checks.

#pragma once

#include "vemwg/projectors.hpp"

#include <functional>

namespace vemwg {

enum class Method { vem_conforming, vem_tilde, wg_modified, wg_original, nc_wg, nc_vem };
enum class Stab {
  dofi,
  boundary,
  tilde,
  nc_boundary,
  none,                  // internal: demonstrates loss of coercivity
  boundary_weighted,     // internal: h^-1 <u_b - u_0, v_b - v_0> on the boundary
  nc_boundary_weighted,  // internal: h^-1 <u_b - Q_b u_0, v_b - Q_b v_0>
};

using ScalarField = std::function<double(Vec2)>;

inline std::string to_string(Method m) {
  switch (m) {
    case Method::vem_conforming: return "vem-conforming";
    case Method::vem_tilde: return "vem-tilde";
    case Method::wg_modified: return "wg-modified";
    case Method::wg_original: return "wg-original";
    case Method::nc_wg: return "nc-wg";
    case Method::nc_vem: return "nc-vem";
  }
  return "?";
}

inline std::string to_string(Stab s) {
  switch (s) {
    case Stab::dofi: return "dofi";
    case Stab::boundary: return "boundary";
    case Stab::tilde: return "tilde";
    case Stab::nc_boundary: return "nc-boundary";
    case Stab::none: return "none";
    case Stab::boundary_weighted: return "boundary-weighted";
    case Stab::nc_boundary_weighted: return "nc-boundary-weighted";
  }
  return "?";
}

inline Method method_from_string(const std::string& s) {
  for (Method m : {Method::vem_conforming, Method::vem_tilde, Method::wg_modified,
                   Method::wg_original, Method::nc_wg, Method::nc_vem})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown method: " + s);
}

inline Stab stab_from_string(const std::string& s) {
  for (Stab k : {Stab::dofi, Stab::boundary, Stab::tilde, Stab::nc_boundary})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown stabilization: " + s);
}

inline bool compatible(Method m, Stab s) {
  if (s == Stab::none) return true;
  switch (m) {
    case Method::vem_conforming:
      return s == Stab::dofi;
    case Method::vem_tilde:
    case Method::wg_modified:
      return s == Stab::tilde || s == Stab::boundary || s == Stab::boundary_weighted;
    case Method::wg_original:
    case Method::nc_wg:
      return s == Stab::nc_boundary || s == Stab::tilde || s == Stab::nc_boundary_weighted;
    case Method::nc_vem:
      return s == Stab::dofi || s == Stab::tilde;
  }
  return false;
}

/// Space a method/stabilization pair is posed on. nc-vem lives on the plain
/// space with the dofi stabilization and on the enlarged space with tilde.
inline SpaceSpec space_of(Method m, Stab s, int k) {
  switch (m) {
    case Method::vem_conforming:
      return conforming_space(k, false);
    case Method::vem_tilde:
    case Method::wg_modified:
      return conforming_space(k, true);
    case Method::wg_original:
    case Method::nc_wg:
      return nonconforming_space(k, true);
    case Method::nc_vem:
      return nonconforming_space(k, s == Stab::tilde);
  }
  throw std::logic_error("unreachable");
}

inline bool is_wg_method(Method m) {
  return m == Method::wg_modified || m == Method::wg_original || m == Method::nc_wg;
}

struct WeakGradientMatrix {
  enum class Space { grad_pk, pk1_squared };
  Eigen::MatrixXd coeffs;  // gradient-space coefficients x local dofs
  Space space = Space::grad_pk;
  int degree = 1;

  int system_size() const { return static_cast<int>(coeffs.rows()); }

  /// Evaluate grad_w v at a point given the local dof vector.
  Vec2 eval(const ScaledMonomialBasis& cell_basis, const Vec2& x,
            const Eigen::VectorXd& dofs) const {
    const Eigen::VectorXd w = coeffs * dofs;
    if (space == Space::grad_pk) {
      const Eigen::Matrix2Xd g = cell_basis.grad(x);
      Vec2 val = Vec2::Zero();
      for (int a = 1; a < cell_basis.size(); ++a) val += w[a - 1] * g.col(a);
      return val;
    }
    const ScaledMonomialBasis low(cell_basis.center(), cell_basis.scale(), degree - 1);
    const Eigen::VectorXd m = low.eval(x);
    const int n = low.size();
    return Vec2(w.head(n).dot(m), w.tail(n).dot(m));
  }
};

namespace detail {

/// Coefficient map from cell-moment dofs to the P_k polynomial u0 they pin
/// down (columns indexed by local dofs; zero outside the moment block).
inline Eigen::MatrixXd interior_polynomial_map(const PolygonMesh& mesh, int c,
                                               const SpaceSpec& spec, const Eigen::MatrixXd& H) {
  if (!spec.enlarged())
    throw std::logic_error("interior polynomial requires the enlarged space");
  const LocalDofSet set = local_dofs(mesh, c, spec);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(poly_dim(spec.degree), set.size());
  C.middleCols(set.moment_offset(), set.n_moment) =
      mesh.geometry(c).area *
      H.llt().solve(Eigen::MatrixXd::Identity(set.n_moment, set.n_moment));
  return C;
}

/// Boundary pairing <v_b, q . n> rows for a vector polynomial family; `flux`
/// maps a physical point to the values of q_row . n for every row.
template <typename Flux>
Eigen::MatrixXd vb_flux_pairing(const PolygonMesh& mesh, int c, const SpaceSpec& spec, int rows,
                                Flux&& flux) {
  const LocalDofSet set = local_dofs(mesh, c, spec);
  const int trace_deg = spec.family == Family::conforming ? spec.degree : spec.degree - 1;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(rows, set.size());
  const int m = static_cast<int>(mesh.cell(c).size());
  for (int le = 0; le < m; ++le) {
    const int e = mesh.cell_edges(c)[le];
    const Eigen::MatrixXd T = spec.family == Family::conforming
                                  ? edge_trace_matrix(mesh, c, spec, le)
                                  : nc_edge_trace_matrix(mesh, c, spec, le);
    const Vec2 n = outward_normal(mesh, c, le);
    const EdgeQuadratureRule rule = edge_quadrature(mesh, e, 2 * spec.degree + 1);
    for (int q = 0; q < rule.tau.size(); ++q) {
      const Vec2 x = edge_point(mesh, e, rule.tau[q]);
      const Eigen::VectorXd trace_row =
          T.transpose() * edge_monomial_eval(trace_deg, rule.tau[q]);
      R.noalias() += rule.weights[q] * flux(x, n) * trace_row.transpose();
    }
  }
  return R;
}

inline Eigen::MatrixXd symmetrized(Eigen::MatrixXd A) { return 0.5 * (A + A.transpose()); }

}  // namespace detail

/// Weak gradient into grad P_k: (grad_w v, grad p) = -(v0, Lap p) +
/// <v_b, n . grad p> for all p in P_k.
inline WeakGradientMatrix weak_gradient_modified(const PolygonMesh& mesh, int c,
                                                 const SpaceSpec& spec) {
  const int k = spec.degree;
  const int n_k = poly_dim(k);
  const ScaledMonomialBasis basis(mesh, c, k);
  const Eigen::MatrixXd H = monomial_mass_matrix(mesh, c, k);
  const Eigen::MatrixXd C = detail::interior_polynomial_map(mesh, c, spec, H);

  // -(v0, Lap m_alpha) by quadrature on the explicit u0 polynomial.
  const QuadratureRule rule = polygon_quadrature(mesh, c, 2 * k + 2);
  Eigen::MatrixXd lap_pair = Eigen::MatrixXd::Zero(n_k, n_k);  // (m_beta, Lap m_alpha)
  for (int q = 0; q < rule.weights.size(); ++q) {
    const Vec2 x = rule.points.col(q);
    lap_pair.noalias() += rule.weights[q] * basis.laplacian(x) * basis.eval(x).transpose();
  }
  Eigen::MatrixXd R = -lap_pair * C;
  R.noalias() += detail::vb_flux_pairing(
      mesh, c, spec, n_k, [&](const Vec2& x, const Vec2& n) -> Eigen::VectorXd {
        return basis.grad(x).transpose() * n;
      });

  const Eigen::MatrixXd G = monomial_stiffness_matrix(mesh, c, k);
  WeakGradientMatrix wg;
  wg.space = WeakGradientMatrix::Space::grad_pk;
  wg.degree = k;
  wg.coeffs = G.bottomRightCorner(n_k - 1, n_k - 1).llt().solve(R.bottomRows(n_k - 1));
  return wg;
}

/// Legacy weak gradient into [P_{k-1}]^2: (grad_w v, q) = -(v0, div q) +
/// <v_b, n . q> for all q.
inline WeakGradientMatrix weak_gradient_original(const PolygonMesh& mesh, int c,
                                                 const SpaceSpec& spec) {
  const int k = spec.degree;
  const int n_low = poly_dim(k - 1);
  const ScaledMonomialBasis basis(mesh, c, k);
  const ScaledMonomialBasis low(mesh, c, k - 1);
  const Eigen::MatrixXd H = monomial_mass_matrix(mesh, c, k);
  const Eigen::MatrixXd C = detail::interior_polynomial_map(mesh, c, spec, H);

  // -(v0, div q): div (m_beta, 0) = dx m_beta, div (0, m_beta) = dy m_beta.
  const QuadratureRule rule = polygon_quadrature(mesh, c, 2 * k + 2);
  Eigen::MatrixXd div_pair = Eigen::MatrixXd::Zero(2 * n_low, poly_dim(k));
  for (int q = 0; q < rule.weights.size(); ++q) {
    const Vec2 x = rule.points.col(q);
    const Eigen::Matrix2Xd g = low.grad(x);
    const Eigen::VectorXd vals = basis.eval(x);
    div_pair.topRows(n_low).noalias() += rule.weights[q] * g.row(0).transpose() * vals.transpose();
    div_pair.bottomRows(n_low).noalias() +=
        rule.weights[q] * g.row(1).transpose() * vals.transpose();
  }
  Eigen::MatrixXd R = -div_pair * C;
  R.noalias() += detail::vb_flux_pairing(
      mesh, c, spec, 2 * n_low, [&](const Vec2& x, const Vec2& n) -> Eigen::VectorXd {
        const Eigen::VectorXd m = low.eval(x);
        Eigen::VectorXd out(2 * n_low);
        out.head(n_low) = n.x() * m;
        out.tail(n_low) = n.y() * m;
        return out;
      });

  const Eigen::MatrixXd Hlow = monomial_mass_matrix(mesh, c, k - 1);
  WeakGradientMatrix wg;
  wg.space = WeakGradientMatrix::Space::pk1_squared;
  wg.degree = k;
  wg.coeffs.resize(2 * n_low, R.cols());
  const Eigen::LLT<Eigen::MatrixXd> llt(Hlow);
  wg.coeffs.topRows(n_low) = llt.solve(R.topRows(n_low));
  wg.coeffs.bottomRows(n_low) = llt.solve(R.bottomRows(n_low));
  return wg;
}

inline WeakGradientMatrix weak_gradient(const PolygonMesh& mesh, int c, Method m,
                                        const SpaceSpec& spec) {
  return m == Method::nc_wg ? weak_gradient_original(mesh, c, spec)
                            : weak_gradient_modified(mesh, c, spec);
}

inline Eigen::MatrixXd local_stiffness(const PolygonMesh& mesh, int c, Method method,
                                       const SpaceSpec& spec) {
  const int k = spec.degree;
  if (is_wg_method(method)) {
    const WeakGradientMatrix wg = weak_gradient(mesh, c, method, spec);
    if (wg.space == WeakGradientMatrix::Space::grad_pk) {
      const Eigen::MatrixXd G = monomial_stiffness_matrix(mesh, c, k);
      const int n = poly_dim(k) - 1;
      return detail::symmetrized(wg.coeffs.transpose() * G.bottomRightCorner(n, n) * wg.coeffs);
    }
    const Eigen::MatrixXd Hlow = monomial_mass_matrix(mesh, c, k - 1);
    const int n = poly_dim(k - 1);
    return detail::symmetrized(wg.coeffs.topRows(n).transpose() * Hlow * wg.coeffs.topRows(n) +
                               wg.coeffs.bottomRows(n).transpose() * Hlow *
                                   wg.coeffs.bottomRows(n));
  }
  const LocalProjector proj = h1_projector(mesh, c, spec);
  const Eigen::MatrixXd G = monomial_stiffness_matrix(mesh, c, k);
  return detail::symmetrized(proj.star.transpose() * G * proj.star);
}

namespace detail {

/// chi_b residual rows of the WG boundary stabilization: identity on the
/// boundary dofs, minus the boundary dofs of the trace of u0.
inline Eigen::MatrixXd boundary_residual(const PolygonMesh& mesh, int c, const SpaceSpec& spec) {
  const LocalDofSet set = local_dofs(mesh, c, spec);
  const int nb = set.n_boundary();
  const Eigen::MatrixXd H = monomial_mass_matrix(mesh, c, spec.degree);
  const Eigen::MatrixXd C = interior_polynomial_map(mesh, c, spec, H);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(nb, set.size());
  R.leftCols(nb).setIdentity();
  for (int s = 0; s < set.n_moment; ++s) {
    const int col = set.moment_offset() + s;
    const Eigen::VectorXd chi = chi_of_polynomial(mesh, c, spec, spec.degree, C.col(col));
    R.col(col) -= chi.head(nb);
  }
  return R;
}

}  // namespace detail

inline Eigen::MatrixXd local_stabilization(const PolygonMesh& mesh, int c, Stab kind,
                                           const SpaceSpec& spec) {
  const LocalDofSet set = local_dofs(mesh, c, spec);
  const int n = set.size();
  switch (kind) {
    case Stab::none:
      return Eigen::MatrixXd::Zero(n, n);
    case Stab::dofi: {
      const Eigen::MatrixXd M = h1_projector(mesh, c, spec).dof;
      const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n) - M;
      return R.transpose() * R;
    }
    case Stab::tilde: {
      const Eigen::MatrixXd M = moment_projector(mesh, c, spec).dof;
      const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n) - M;
      return R.transpose() * R;
    }
    case Stab::boundary:
    case Stab::nc_boundary: {
      if ((kind == Stab::boundary) != (spec.family == Family::conforming))
        throw std::invalid_argument("stabilization " + to_string(kind) +
                                    " does not match the space family");
      const Eigen::MatrixXd R = detail::boundary_residual(mesh, c, spec);
      return R.transpose() * R;
    }
    case Stab::boundary_weighted:
    case Stab::nc_boundary_weighted: {
      // h^-1 <u_b - u_0, v_b - v_0>; the nonconforming variant compares
      // against Q_b u_0, the L2(e) projection of the trace onto P_{k-1}(e).
      const int k = spec.degree;
      const Eigen::MatrixXd H = monomial_mass_matrix(mesh, c, k);
      const Eigen::MatrixXd C = detail::interior_polynomial_map(mesh, c, spec, H);
      const ScaledMonomialBasis basis(mesh, c, k);
      const bool conf = spec.family == Family::conforming;
      const int trace_deg = conf ? k : k - 1;
      const double hinv = 1.0 / mesh.geometry(c).diameter;
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
      const int m = static_cast<int>(mesh.cell(c).size());
      for (int le = 0; le < m; ++le) {
        const int e = mesh.cell_edges(c)[le];
        const Eigen::MatrixXd T =
            conf ? edge_trace_matrix(mesh, c, spec, le) : nc_edge_trace_matrix(mesh, c, spec, le);
        const EdgeQuadratureRule rule = edge_quadrature(mesh, e, 2 * k + 1);
        // u_0 on the edge as trace_deg coefficients: raw expansion for the
        // conforming form, Q_b projection for the nonconforming one.
        Eigen::MatrixXd U0 = Eigen::MatrixXd::Zero(trace_deg + 1, n);
        for (int q = 0; q < rule.tau.size(); ++q) {
          const Vec2 x = edge_point(mesh, e, rule.tau[q]);
          U0.noalias() += rule.weights[q] / mesh.edge_length(e) *
                          edge_monomial_eval(trace_deg, rule.tau[q]) *
                          (C.transpose() * basis.eval(x)).transpose();
        }
        U0 = edge_monomial_mass_matrix(trace_deg).llt().solve(U0);
        for (int q = 0; q < rule.tau.size(); ++q) {
          const Eigen::VectorXd em = edge_monomial_eval(trace_deg, rule.tau[q]);
          Eigen::VectorXd row = (T - U0).transpose() * em;
          S.noalias() += hinv * rule.weights[q] * row * row.transpose();
        }
      }
      return S;
    }
  }
  throw std::logic_error("unreachable");
}

/// Load vector for the method's right-hand-side rule.
inline Eigen::VectorXd local_load(const PolygonMesh& mesh, int c, Method method,
                                  const SpaceSpec& spec, const ScalarField& f) {
  const int k = spec.degree;
  const LocalDofSet set = local_dofs(mesh, c, spec);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(set.size());
  const double area = mesh.geometry(c).area;
  const QuadratureRule rule = polygon_quadrature(mesh, c, 2 * k + 2);

  const bool wg_rule = is_wg_method(method) || spec.enlarged();
  if (wg_rule) {
    // (f, v0) = (f, Pi_k v): moments of f against the dual of the moment dofs.
    const ScaledMonomialBasis basis(mesh, c, k);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(basis.size());
    for (int q = 0; q < rule.weights.size(); ++q)
      F += rule.weights[q] * f(rule.points.col(q)) * basis.eval(rule.points.col(q));
    const Eigen::MatrixXd H = monomial_mass_matrix(mesh, c, k);
    load.segment(set.moment_offset(), set.n_moment) = area * H.llt().solve(F);
    return load;
  }

  if (k >= 2) {
    // (Q_{k-2} f, v): moments of Q_{k-2} f hit the cell-moment dofs.
    const ScaledMonomialBasis low(mesh, c, k - 2);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(low.size());
    for (int q = 0; q < rule.weights.size(); ++q)
      F += rule.weights[q] * f(rule.points.col(q)) * low.eval(rule.points.col(q));
    const Eigen::MatrixXd Hlow = monomial_mass_matrix(mesh, c, k - 2);
    load.segment(set.moment_offset(), set.n_moment) = area * Hlow.llt().solve(F);
    return load;
  }

  // k = 1 mean rules: (Q_0 f, bar v) with bar v the mean of the vertex dofs
  // (conforming) or of the edge dofs (nonconforming).
  double integral = 0.0;
  for (int q = 0; q < rule.weights.size(); ++q) integral += rule.weights[q] * f(rule.points.col(q));
  const int nb = set.n_boundary();
  const int n_avg = spec.family == Family::conforming ? set.n_vertex : nb;
  for (int i = 0; i < n_avg; ++i) load[i] = integral / n_avg;
  return load;
}

struct LocalForm {
  Eigen::MatrixXd A;  // consistency term
  Eigen::MatrixXd S;  // stabilization
  Eigen::VectorXd f;  // load
};

inline LocalForm local_form(const PolygonMesh& mesh, int c, Method method, Stab stab,
                            const SpaceSpec& spec, const ScalarField& f) {
  LocalForm form;
  form.A = local_stiffness(mesh, c, method, spec);
  form.S = local_stabilization(mesh, c, stab, spec);
  form.f = local_load(mesh, c, method, spec, f);
  return form;
}

}  // namespace vemwg
