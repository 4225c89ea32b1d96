#include "vemwg/forms.hpp"
#include "vemwg/mesh_gen.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace vemwg;

namespace {

PolygonMesh unit_square_mesh() { return generate_structured(MeshKind::square, 1); }

Eigen::VectorXd random_coeffs(int n, std::mt19937_64& rng) {
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c[i] = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
  return c;
}

// Classical P1 stiffness on a triangle: A_ij = |T| grad(lambda_i).grad(lambda_j),
// the cotangent formula in gradient form.
Eigen::Matrix3d fem_p1_stiffness(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  const double a2 = (p1 - p0).x() * (p2 - p0).y() - (p2 - p0).x() * (p1 - p0).y();
  const double area = 0.5 * a2;
  auto rot = [](const Vec2& v) { return Vec2(-v.y(), v.x()); };
  const Vec2 g0 = rot(p2 - p1) / a2;
  const Vec2 g1 = rot(p0 - p2) / a2;
  const Vec2 g2 = rot(p1 - p0) / a2;
  Eigen::Matrix3d A;
  const Vec2 g[3] = {g0, g1, g2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = area * g[i].dot(g[j]);
  return A;
}

double rel_frobenius(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  return (X - Y).norm() / std::max({X.norm(), Y.norm(), 1e-300});
}

}  // namespace

TEST_CASE("weak gradient consistency: constants and polynomials") {
  std::mt19937_64 rng(9);
  const PolygonMesh mesh = generate_structured(MeshKind::perturbed_square, 2,
                                               GeneratorOptions{.seed = 12, .perturbation = 0.2});
  for (int k = 1; k <= 3; ++k) {
    for (Family fam : {Family::conforming, Family::nonconforming}) {
      const SpaceSpec spec =
          fam == Family::conforming ? conforming_space(k, true) : nonconforming_space(k, true);
      for (int c = 0; c < mesh.n_cells(); ++c) {
        const Eigen::MatrixXd D = dof_matrix(mesh, c, spec, k);
        for (bool original : {false, true}) {
          const WeakGradientMatrix wg = original ? weak_gradient_original(mesh, c, spec)
                                                 : weak_gradient_modified(mesh, c, spec);
          // constant -> zero gradient
          Eigen::VectorXd one = Eigen::VectorXd::Zero(poly_dim(k));
          one[0] = 1.0;
          REQUIRE((wg.coeffs * (D * one)).cwiseAbs().maxCoeff() < 1e-11);
          // chi(p) -> grad p, checked pointwise
          const Eigen::VectorXd p = random_coeffs(poly_dim(k), rng);
          const Eigen::VectorXd dofs = D * p;
          const ScaledMonomialBasis basis(mesh, c, k);
          for (const Vec2& x : {mesh.geometry(c).centroid, mesh.vertex(mesh.cell(c)[0])}) {
            const Vec2 grad_w = wg.eval(basis, x, dofs);
            const Vec2 grad_p = basis.grad(x) * p;
            REQUIRE((grad_w - grad_p).norm() < 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("weak gradient local system sizes") {
  const PolygonMesh mesh = unit_square_mesh();
  const SpaceSpec spec = conforming_space(2, true);
  CHECK(weak_gradient_modified(mesh, 0, spec).system_size() == 5);   // (k+1)(k+2)/2 - 1
  CHECK(weak_gradient_original(mesh, 0, spec).system_size() == 6);   // k(k+1)
}

TEST_CASE("triangle k=1 stiffness equals classical FEM") {
  const std::vector<Vec2> verts = {{0.1, 0.0}, {1.2, 0.3}, {0.4, 1.1}};
  const PolygonMesh mesh = build_topology(PolygonMesh(verts, {{0, 1, 2}}));
  const Eigen::Matrix3d oracle = fem_p1_stiffness(verts[0], verts[1], verts[2]);

  const Eigen::MatrixXd vem = local_stiffness(mesh, 0, Method::vem_conforming,
                                              conforming_space(1, false));
  REQUIRE(rel_frobenius(vem, oracle) < 1e-12);

  // WG stiffness on the enlarged space: the vertex block must match, and the
  // cell-moment rows are zero at k=1.
  const Eigen::MatrixXd wg =
      local_stiffness(mesh, 0, Method::wg_modified, conforming_space(1, true));
  REQUIRE(rel_frobenius(wg.topLeftCorner(3, 3), oracle) < 1e-12);
  CHECK(wg.bottomRows(3).cwiseAbs().maxCoeff() < 1e-13);

  // dofi stabilization vanishes on triangles: V_k(T) = P_k(T).
  const Eigen::MatrixXd S =
      local_stabilization(mesh, 0, Stab::dofi, conforming_space(1, false));
  CHECK(S.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("VEM and modified-WG stiffness agree entrywise") {
  for (MeshKind kind : {MeshKind::square, MeshKind::hexagon_dominant, MeshKind::perturbed_square}) {
    const PolygonMesh mesh = generate_structured(kind, 2, GeneratorOptions{.seed = 2});
    for (int k = 1; k <= 3; ++k) {
      const SpaceSpec conf = conforming_space(k, true);
      const SpaceSpec nc = nonconforming_space(k, true);
      for (int c = 0; c < mesh.n_cells(); ++c) {
        const Eigen::MatrixXd a_vem = local_stiffness(mesh, c, Method::vem_tilde, conf);
        const Eigen::MatrixXd a_wg = local_stiffness(mesh, c, Method::wg_modified, conf);
        REQUIRE(rel_frobenius(a_vem, a_wg) < 1e-11);
        const Eigen::MatrixXd a_ncvem = local_stiffness(mesh, c, Method::nc_vem,
                                                        nc);
        const Eigen::MatrixXd a_ncwg = local_stiffness(mesh, c, Method::wg_original, nc);
        REQUIRE(rel_frobenius(a_ncvem, a_ncwg) < 1e-11);
      }
    }
  }
}

TEST_CASE("stiffness matrices are symmetric PSD with constants in the kernel") {
  const PolygonMesh mesh = generate_structured(MeshKind::hexagon_dominant, 3);
  const int c = mesh.n_cells() / 2;
  const int k = 2;
  struct Cfg {
    Method m;
    SpaceSpec spec;
  };
  for (const Cfg& cfg : {Cfg{Method::vem_conforming, conforming_space(k, false)},
                         Cfg{Method::wg_modified, conforming_space(k, true)},
                         Cfg{Method::wg_original, nonconforming_space(k, true)},
                         Cfg{Method::nc_wg, nonconforming_space(k, true)},
                         Cfg{Method::nc_vem, nonconforming_space(k, false)}}) {
    const Eigen::MatrixXd A = local_stiffness(mesh, c, cfg.m, cfg.spec);
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // constant dof vector in the kernel <=> zero row sums against chi(1)
    Eigen::VectorXd one = Eigen::VectorXd::Zero(poly_dim(k));
    one[0] = 1.0;
    const Eigen::VectorXd chi1 = chi_of_polynomial(mesh, c, cfg.spec, k, one);
    CHECK((A * chi1).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    CHECK(es.eigenvalues()[0] > -1e-12);
  }
}

TEST_CASE("stabilizations are k-consistent symmetric PSD") {
  std::mt19937_64 rng(41);
  const PolygonMesh mesh = generate_structured(MeshKind::perturbed_square, 2,
                                               GeneratorOptions{.seed = 5, .perturbation = 0.15});
  for (int k = 1; k <= 3; ++k) {
    struct Cfg {
      Stab s;
      SpaceSpec spec;
    };
    for (const Cfg& cfg : {Cfg{Stab::dofi, conforming_space(k, false)},
                           Cfg{Stab::dofi, nonconforming_space(k, false)},
                           Cfg{Stab::tilde, conforming_space(k, true)},
                           Cfg{Stab::tilde, nonconforming_space(k, true)},
                           Cfg{Stab::boundary, conforming_space(k, true)},
                           Cfg{Stab::nc_boundary, nonconforming_space(k, true)},
                           Cfg{Stab::boundary_weighted, conforming_space(k, true)},
                           Cfg{Stab::nc_boundary_weighted, nonconforming_space(k, true)}}) {
      for (int c = 0; c < mesh.n_cells(); ++c) {
        const Eigen::MatrixXd S = local_stabilization(mesh, c, cfg.s, cfg.spec);
        REQUIRE((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        const Eigen::VectorXd p = random_coeffs(poly_dim(k), rng);
        const Eigen::VectorXd chi = chi_of_polynomial(mesh, c, cfg.spec, k, p);
        REQUIRE((S * chi).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, p.cwiseAbs().maxCoeff()));
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        REQUIRE(es.eigenvalues()[0] > -1e-12);
      }
    }
  }
}

TEST_CASE("tilde residual factor vanishes on cell-moment rows") {
  const PolygonMesh mesh = generate_structured(MeshKind::hexagon_dominant, 2);
  for (int k = 1; k <= 3; ++k) {
    const SpaceSpec spec = conforming_space(k, true);
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const LocalDofSet set = local_dofs(mesh, c, spec);
      const Eigen::MatrixXd M = moment_projector(mesh, c, spec).dof;
      const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(set.size(), set.size()) - M;
      // chi_K^k(u - Pi_k u) = 0: the moment rows of the residual are zero.
      CHECK(R.bottomRows(set.n_moment).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("tilde stabilization equals the WG boundary stabilization") {
  const PolygonMesh mesh = generate_structured(MeshKind::perturbed_square, 2,
                                               GeneratorOptions{.seed = 31, .perturbation = 0.2});
  for (int k = 1; k <= 3; ++k) {
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const SpaceSpec conf = conforming_space(k, true);
      const Eigen::MatrixXd tilde = local_stabilization(mesh, c, Stab::tilde, conf);
      const Eigen::MatrixXd bdry = local_stabilization(mesh, c, Stab::boundary, conf);
      REQUIRE(rel_frobenius(tilde, bdry) < 1e-12);

      const SpaceSpec nc = nonconforming_space(k, true);
      const Eigen::MatrixXd nc_tilde = local_stabilization(mesh, c, Stab::tilde, nc);
      const Eigen::MatrixXd nc_bdry = local_stabilization(mesh, c, Stab::nc_boundary, nc);
      REQUIRE(rel_frobenius(nc_tilde, nc_bdry) < 1e-12);
    }
  }
}

TEST_CASE("weighted stabilizations are spectrally comparable to dof forms") {
  std::mt19937_64 rng(53);
  const PolygonMesh mesh = generate_structured(MeshKind::hexagon_dominant, 2);
  const int k = 2;
  const SpaceSpec spec = conforming_space(k, true);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Eigen::MatrixXd S = local_stabilization(mesh, c, Stab::boundary, spec);
    const Eigen::MatrixXd Sw = local_stabilization(mesh, c, Stab::boundary_weighted, spec);
    for (int t = 0; t < 5; ++t) {
      const Eigen::VectorXd v = random_coeffs(static_cast<int>(S.rows()), rng);
      const double a = v.dot(S * v), b = v.dot(Sw * v);
      if (a < 1e-12 && b < 1e-12) continue;
      REQUIRE(a / b > 1e-3);
      REQUIRE(a / b < 1e3);
    }
  }
}

TEST_CASE("stabilization family mismatch is rejected") {
  const PolygonMesh mesh = unit_square_mesh();
  CHECK_THROWS(local_stabilization(mesh, 0, Stab::nc_boundary, conforming_space(2, true)));
  CHECK_THROWS(local_stabilization(mesh, 0, Stab::boundary, nonconforming_space(2, true)));
}

TEST_CASE("loads: zero field, constants, and the WG moment rule") {
  const PolygonMesh mesh = unit_square_mesh();

  const SpaceSpec wg2 = conforming_space(2, true);
  const Eigen::VectorXd zero =
      local_load(mesh, 0, Method::wg_modified, wg2, [](Vec2) { return 0.0; });
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  // f = 1, k = 1 conforming VEM: each vertex dof receives area/4.
  const Eigen::VectorXd mean =
      local_load(mesh, 0, Method::vem_conforming, conforming_space(1, false),
                 [](Vec2) { return 1.0; });
  REQUIRE(mean.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(mean[i] == Catch::Approx(0.25).epsilon(1e-13));

  // WG load pairs f with the interior polynomial: <load, v> = (f, u0(v)).
  auto f = [](Vec2 x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); };
  const Eigen::VectorXd load = local_load(mesh, 0, Method::wg_modified, wg2, f);
  std::mt19937_64 rng(3);
  const LocalDofSet set = local_dofs(mesh, 0, wg2);
  Eigen::VectorXd v = random_coeffs(set.size(), rng);
  // independent high-order quadrature of (f, u0)
  const Eigen::MatrixXd H = monomial_mass_matrix(mesh, 0, 2);
  Eigen::VectorXd moments = v.segment(set.moment_offset(), set.n_moment);
  const Eigen::VectorXd u0 = mesh.geometry(0).area * H.llt().solve(moments);
  const ScaledMonomialBasis basis(mesh, 0, 2);
  const QuadratureRule rule = polygon_quadrature(mesh, 0, 16);
  double oracle = 0.0;
  for (int q = 0; q < rule.weights.size(); ++q)
    oracle += rule.weights[q] * f(rule.points.col(q)) * basis.eval(rule.points.col(q)).dot(u0);
  CHECK(load.dot(v) == Catch::Approx(oracle).margin(2e-4));
}

TEST_CASE("method/stabilization compatibility table") {
  CHECK(compatible(Method::vem_conforming, Stab::dofi));
  CHECK_FALSE(compatible(Method::vem_conforming, Stab::tilde));
  CHECK(compatible(Method::vem_tilde, Stab::tilde));
  CHECK(compatible(Method::vem_tilde, Stab::boundary));
  CHECK(compatible(Method::wg_modified, Stab::boundary));
  CHECK_FALSE(compatible(Method::wg_modified, Stab::dofi));
  CHECK(compatible(Method::wg_original, Stab::nc_boundary));
  CHECK(compatible(Method::wg_original, Stab::tilde));
  CHECK_FALSE(compatible(Method::wg_original, Stab::boundary));
  CHECK(compatible(Method::nc_vem, Stab::dofi));
  CHECK(compatible(Method::nc_vem, Stab::tilde));
  CHECK_FALSE(compatible(Method::nc_vem, Stab::boundary));
  CHECK(space_of(Method::nc_vem, Stab::dofi, 2) == nonconforming_space(2, false));
  CHECK(space_of(Method::nc_vem, Stab::tilde, 2) == nonconforming_space(2, true));
}

TEST_CASE("empirical stability margin is positive (recorded)") {
  const PolygonMesh mesh = generate_structured(MeshKind::hexagon_dominant, 2);
  const int k = 2;
  const SpaceSpec spec = conforming_space(k, true);
  double worst_ratio = 1e300;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Eigen::MatrixXd A = local_stiffness(mesh, c, Method::wg_modified, spec);
    const Eigen::MatrixXd S = local_stabilization(mesh, c, Stab::boundary, spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_sum(A + S);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_a(A);
    // smallest nonzero eigenvalue of A (its rank is dim grad P_k)
    const int null_a = static_cast<int>(A.rows()) - (poly_dim(k) - 1);
    const double min_nonzero_a = es_a.eigenvalues()[null_a];
    const double min_nonzero_sum = es_sum.eigenvalues()[1];  // constant kernel only
    REQUIRE(min_nonzero_sum > 0.0);
    worst_ratio = std::min(worst_ratio, min_nonzero_sum / min_nonzero_a);
  }
  INFO("stabilized/unstabilized smallest nonzero eigenvalue ratio: " << worst_ratio);
  CHECK(worst_ratio > 0.0);
}
