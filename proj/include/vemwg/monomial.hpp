// Scaled monomial bases. On a cell: m_s(x) = ((x - x_c)/h_K)^s with graded
// lexicographic exponent ordering 1, x, y, x^2, xy, y^2, ... On an edge:
// 1D monomials (tau - 1/2)^j in the canonical arclength parameter, centered
// at the edge midpoint with scale equal to the edge length.

#pragma once

#include "vemwg/quadrature.hpp"

namespace vemwg {

/// Number of 2D monomials of total degree <= deg.
constexpr int poly_dim(int deg) { return deg < 0 ? 0 : (deg + 1) * (deg + 2) / 2; }

/// Exponent pair of the i-th monomial in graded lexicographic order.
inline std::pair<int, int> monomial_exponents(int i) {
  int deg = 0;
  while (poly_dim(deg) <= i) ++deg;
  const int k = i - poly_dim(deg - 1);  // position within the degree block
  return {deg - k, k};
}

/// Index of monomial x^a y^b in graded lexicographic order.
constexpr int monomial_index(int a, int b) { return poly_dim(a + b - 1) + b; }

class ScaledMonomialBasis {
 public:
  ScaledMonomialBasis(Vec2 center, double scale, int degree)
      : center_(center), scale_(scale), degree_(degree) {}

  /// Basis attached to cell c: centroid center, diameter scale.
  ScaledMonomialBasis(const PolygonMesh& mesh, int c, int degree)
      : ScaledMonomialBasis(mesh.geometry(c).centroid, mesh.geometry(c).diameter, degree) {}

  int degree() const { return degree_; }
  int size() const { return poly_dim(degree_); }
  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }

  Eigen::VectorXd eval(const Vec2& x) const {
    const double xi = (x.x() - center_.x()) / scale_;
    const double eta = (x.y() - center_.y()) / scale_;
    Eigen::VectorXd v(size());
    for (int i = 0; i < size(); ++i) {
      auto [a, b] = monomial_exponents(i);
      v[i] = ipow(xi, a) * ipow(eta, b);
    }
    return v;
  }

  /// Gradients as a 2 x size matrix (column i = grad of monomial i).
  Eigen::Matrix2Xd grad(const Vec2& x) const {
    const double xi = (x.x() - center_.x()) / scale_;
    const double eta = (x.y() - center_.y()) / scale_;
    Eigen::Matrix2Xd g(2, size());
    for (int i = 0; i < size(); ++i) {
      auto [a, b] = monomial_exponents(i);
      g(0, i) = a == 0 ? 0.0 : a * ipow(xi, a - 1) * ipow(eta, b) / scale_;
      g(1, i) = b == 0 ? 0.0 : b * ipow(xi, a) * ipow(eta, b - 1) / scale_;
    }
    return g;
  }

  Eigen::VectorXd laplacian(const Vec2& x) const {
    const double xi = (x.x() - center_.x()) / scale_;
    const double eta = (x.y() - center_.y()) / scale_;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size());
    const double s2 = scale_ * scale_;
    for (int i = 0; i < size(); ++i) {
      auto [a, b] = monomial_exponents(i);
      if (a >= 2) v[i] += a * (a - 1) * ipow(xi, a - 2) * ipow(eta, b) / s2;
      if (b >= 2) v[i] += b * (b - 1) * ipow(xi, a) * ipow(eta, b - 2) / s2;
    }
    return v;
  }

  /// Exact expansion of each Laplacian in the same basis: column i holds the
  /// coefficients of Delta(m_i), supported on degrees <= deg(m_i) - 2.
  Eigen::MatrixXd laplacian_coefficients() const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(size(), size());
    const double s2 = scale_ * scale_;
    for (int i = 0; i < size(); ++i) {
      auto [a, b] = monomial_exponents(i);
      if (a >= 2) L(monomial_index(a - 2, b), i) += a * (a - 1) / s2;
      if (b >= 2) L(monomial_index(a, b - 2), i) += b * (b - 1) / s2;
    }
    return L;
  }

 private:
  static double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  }

  Vec2 center_;
  double scale_;
  int degree_;
};

/// Edge monomials (tau - 1/2)^j, j = 0..deg, in the canonical parameter.
inline Eigen::VectorXd edge_monomial_eval(int deg, double tau) {
  Eigen::VectorXd v(deg + 1);
  double p = 1.0;
  for (int j = 0; j <= deg; ++j) {
    v[j] = p;
    p *= (tau - 0.5);
  }
  return v;
}

/// Exact unit-parameter mass matrix M_ij = int_0^1 (t-1/2)^{i+j} dt.
inline Eigen::MatrixXd edge_monomial_mass_matrix(int deg) {
  Eigen::MatrixXd M(deg + 1, deg + 1);
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; j <= deg; ++j) {
      const int p = i + j;
      M(i, j) = (p % 2 == 0) ? std::pow(0.5, p) / (p + 1) : 0.0;
    }
  return M;
}

/// Mass matrix H_ij = (m_i, m_j)_K of the scaled monomials up to degree deg.
inline Eigen::MatrixXd monomial_mass_matrix(const PolygonMesh& mesh, int c, int deg) {
  const ScaledMonomialBasis basis(mesh, c, deg);
  const QuadratureRule quad = polygon_quadrature(mesh, c, 2 * deg + 2);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int q = 0; q < quad.weights.size(); ++q) {
    const Eigen::VectorXd m = basis.eval(quad.points.col(q));
    H.noalias() += quad.weights[q] * m * m.transpose();
  }
  return H;
}

/// Stiffness Gram G_ij = (grad m_i, grad m_j)_K; the constant row/column is 0.
inline Eigen::MatrixXd monomial_stiffness_matrix(const PolygonMesh& mesh, int c, int deg) {
  const ScaledMonomialBasis basis(mesh, c, deg);
  const QuadratureRule quad = polygon_quadrature(mesh, c, 2 * deg + 2);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int q = 0; q < quad.weights.size(); ++q) {
    const Eigen::Matrix2Xd g = basis.grad(quad.points.col(q));
    G.noalias() += quad.weights[q] * g.transpose() * g;
  }
  return G;
}

}  // namespace vemwg
