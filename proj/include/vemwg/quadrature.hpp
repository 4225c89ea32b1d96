// Numerical integration: Gauss-Legendre rules on edges (arclength
// parametrization from the canonical start vertex) and centroid-fan rules on
// star-shaped polygons. Every rule carries its exactness degree.

#pragma once

#include "vemwg/mesh.hpp"

#include <Eigen/Dense>

namespace vemwg {

/// Quadrature on a 2D region: points, weights summing to the area.
struct QuadratureRule {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;
  int degree = 0;
};

/// Quadrature on an edge: parameters tau in [0,1] measured from the canonical
/// start vertex, weights summing to the edge length (or to 1 for the
/// reference rule).
struct EdgeQuadratureRule {
  Eigen::VectorXd tau;
  Eigen::VectorXd weights;
  int degree = 0;
};

namespace detail {

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
inline void gauss_legendre_01(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence on [-1,1]
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    const double weight = 2.0 / ((1.0 - t * t) * dp * dp);
    x[i] = 0.5 * (1.0 - t);  // symmetric counterpart fills from the right
    w[i] = 0.5 * weight;
    x[n - 1 - i] = 0.5 * (1.0 + t);
    w[n - 1 - i] = 0.5 * weight;
  }
}

}  // namespace detail

/// Reference Gauss-Legendre rule on [0,1] exact to polynomial degree d.
inline EdgeQuadratureRule edge_quadrature(int d) {
  if (d < 0) throw std::invalid_argument("quadrature degree must be >= 0");
  const int n = (d + 2) / 2;  // ceil((d+1)/2)
  EdgeQuadratureRule rule;
  detail::gauss_legendre_01(n, rule.tau, rule.weights);
  rule.degree = 2 * n - 1;
  return rule;
}

/// Physical rule on edge e: tau parametrizes arclength from the canonical
/// start vertex, weights sum to |e|.
inline EdgeQuadratureRule edge_quadrature(const PolygonMesh& mesh, int e, int d) {
  EdgeQuadratureRule rule = edge_quadrature(d);
  rule.weights *= mesh.edge_length(e);
  return rule;
}

inline Vec2 edge_point(const PolygonMesh& mesh, int e, double tau) {
  const Edge& ed = mesh.edge(e);
  return (1.0 - tau) * mesh.vertex(ed.v0) + tau * mesh.vertex(ed.v1);
}

/// Rule on the reference triangle (0,0),(1,0),(0,1) exact to degree d, built
/// as a collapsed tensor product of Gauss-Legendre rules (all weights
/// positive, all points interior).
inline QuadratureRule reference_triangle_quadrature(int d) {
  if (d < 0) throw std::invalid_argument("quadrature degree must be >= 0");
  const int n = (d + 3) / 2;  // handles the extra Jacobian factor
  Eigen::VectorXd x, w;
  detail::gauss_legendre_01(n, x, w);
  QuadratureRule rule;
  rule.points.resize(2, n * n);
  rule.weights.resize(n * n);
  int q = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j, ++q) {
      const double a = x[i], b = x[j];
      rule.points.col(q) = Vec2(a * (1.0 - b), a * b);
      rule.weights[q] = w[i] * w[j] * a;
    }
  rule.degree = d;
  return rule;
}

/// Rule on cell c exact to degree d: fan-triangulate from the centroid and
/// map the reference triangle rule onto each fan triangle. Requires the cell
/// to be star-shaped with respect to its centroid.
inline QuadratureRule polygon_quadrature(const PolygonMesh& mesh, int c, int d) {
  const auto& cell = mesh.cell(c);
  const int m = static_cast<int>(cell.size());
  const Vec2 xc = mesh.geometry(c).centroid;
  const QuadratureRule ref = reference_triangle_quadrature(d);
  const int nq = static_cast<int>(ref.weights.size());

  QuadratureRule rule;
  rule.points.resize(2, m * nq);
  rule.weights.resize(m * nq);
  rule.degree = d;
  for (int i = 0; i < m; ++i) {
    const Vec2 p = mesh.vertex(cell[i]);
    const Vec2 q = mesh.vertex(cell[(i + 1) % m]);
    const double a2 = detail::cross2(p - xc, q - xc);  // twice the fan-triangle area
    if (!(a2 > 0.0))
      throw std::invalid_argument("cell " + std::to_string(c) +
                                  " is not star-shaped w.r.t. its centroid (fan triangle at "
                                  "local vertex " +
                                  std::to_string(i) + " has non-positive area)");
    for (int k = 0; k < nq; ++k) {
      const double l1 = ref.points(0, k), l2 = ref.points(1, k);
      rule.points.col(i * nq + k) = xc + l1 * (p - xc) + l2 * (q - xc);
      rule.weights[i * nq + k] = ref.weights[k] * a2;
    }
  }
  return rule;
}

}  // namespace vemwg
