#include <doctest.h>

#include <cmath>

#include "matmi/errors.hpp"
#include "matmi/fields.hpp"
#include "matmi/rng.hpp"
#include "matmi/verify.hpp"

using namespace matmi;

TEST_CASE("fields: p1 gradient is exact for affine functions") {
  Mesh mesh = build_unit_square_mesh(8);

  VectorField g1 = p1_gradient(ScalarField::from_function(mesh, [](const Vec2& x) {
    return x.x();
  }));
  VectorField g0 = p1_gradient(ScalarField::constant(mesh, 3.7));
  VectorField ga = p1_gradient(ScalarField::from_function(mesh, [](const Vec2& x) {
    return 3.0 * x.x() + 2.0 * x.y() - 1.0;
  }));
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    CHECK((g1.element_values().row(e).transpose() - Vec2(1, 0)).norm() < 1e-13);
    CHECK(g0.element_values().row(e).norm() < 1e-13);
    CHECK((ga.element_values().row(e).transpose() - Vec2(3, 2)).norm() < 1e-12);
  }
}

TEST_CASE("fields: p1 gradient is linear") {
  Mesh mesh = build_unit_square_mesh(6);
  Rng rng(5);
  Eigen::VectorXd fa(mesh.vertex_count()), fb(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    fa[i] = rng.next_symmetric();
    fb[i] = rng.next_symmetric();
  }
  const double alpha = 1.7, beta = -0.4;
  VectorField lhs = p1_gradient(ScalarField(mesh, alpha * fa + beta * fb));
  VectorField ga = p1_gradient(ScalarField(mesh, fa));
  VectorField gb = p1_gradient(ScalarField(mesh, fb));
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const Vec2 want = alpha * ga.element_values().row(e).transpose() +
                      beta * gb.element_values().row(e).transpose();
    CHECK((lhs.element_values().row(e).transpose() - want).norm() < 1e-12);
  }
}

TEST_CASE("fields: weak divergence of reference fields") {
  Mesh mesh = build_unit_square_mesh(12);

  ScalarField d1 = weak_divergence(
      VectorField::from_function(mesh, [](const Vec2& x) { return x; }));
  ScalarField d0 = weak_divergence(
      VectorField::from_function(mesh, [](const Vec2&) { return Vec2(0.3, -0.8); }));
  Gauge gauge;
  ScalarField dr = weak_divergence(VectorField::from_function(
      mesh, [&gauge](const Vec2& x) { return gauge.e_tilde_cross_b0(x); }));
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (mesh.vertex_on_boundary[i]) continue;
    CHECK(std::abs(d1[i] - 2.0) < 1e-12);
    CHECK(std::abs(d0[i]) < 1e-12);
    CHECK(std::abs(dr[i] - 1.0) < 1e-12);
  }
}

TEST_CASE("fields: weak divergence of a rotated p1 gradient vanishes inside") {
  // underpins F(const sigma) == const sigma at interior nodes
  Mesh mesh = build_unit_square_mesh(9);
  Rng rng(17);
  Eigen::VectorXd f(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) f[i] = rng.next_symmetric();
  VectorField grad = p1_gradient(ScalarField(mesh, f));
  Eigen::Matrix<double, Eigen::Dynamic, 2> rot(mesh.triangle_count(), 2);
  for (int e = 0; e < mesh.triangle_count(); ++e)
    rot.row(e) = cross_with_b0(grad.element_values().row(e).transpose()).transpose();
  ScalarField d = weak_divergence(VectorField::element(mesh, std::move(rot)));
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (!mesh.vertex_on_boundary[i]) CHECK(std::abs(d[i]) < 1e-12);
}

TEST_CASE("fields: l2 inner products") {
  Mesh mesh = build_unit_square_mesh(64);
  ScalarField one = ScalarField::constant(mesh, 1.0);
  ScalarField x1 = ScalarField::from_function(mesh, [](const Vec2& x) { return x.x(); });
  CHECK(l2_inner(one, one) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(l2_inner(one, x1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(l2_inner(x1, x1) - 1.0 / 3.0) < 1e-4);

  Mesh other = build_unit_square_mesh(8);
  CHECK_THROWS_AS(l2_inner(one, ScalarField::constant(other, 1.0)), InputError);
}

TEST_CASE("fields: l2 inner positivity") {
  Mesh mesh = build_unit_square_mesh(10);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd v(mesh.vertex_count());
    for (int i = 0; i < mesh.vertex_count(); ++i) v[i] = rng.next_symmetric();
    ScalarField f(mesh, v);
    CHECK(l2_inner(f, f) >= 0);
  }
  CHECK(l2_norm(ScalarField::zero(mesh)) == 0.0);
  ScalarField tiny = ScalarField::from_function(mesh, [](const Vec2& x) {
    return x.x() > 0.49 && x.x() < 0.51 ? 1e-8 : 0.0;
  });
  CHECK(l2_norm(tiny) > 0);
}

TEST_CASE("fields: elementwise curl of a p1 gradient is zero") {
  Mesh mesh = build_unit_square_mesh(7);
  Rng rng(9);
  Eigen::VectorXd f(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) f[i] = rng.next_symmetric();
  Eigen::VectorXd curl = curl_per_element(p1_gradient(ScalarField(mesh, f)));
  CHECK(curl.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fields: gauge curl is one on every element") {
  for (const Vec2& c : {Vec2(0.5, 0.5), Vec2(0, 0), Vec2(-1.3, 2.0)}) {
    Mesh mesh = build_unit_square_mesh(6);
    Gauge gauge{c};
    VectorField et = VectorField::from_function(
        mesh, [&gauge](const Vec2& x) { return gauge.e_tilde(x); });
    Eigen::VectorXd curl = curl_per_element(et);
    for (int e = 0; e < mesh.triangle_count(); ++e)
      CHECK(std::abs(curl[e] - 1.0) < 1e-14);
  }
}

TEST_CASE("fields: tensor eigenvalue helpers") {
  Mesh mesh = build_unit_square_mesh(4);
  TensorField D = TensorField::from_functions(
      mesh, [](const Vec2&) { return 0.8; }, [](const Vec2&) { return 0.1; },
      [](const Vec2&) { return 0.6; });
  double lo, hi, dist;
  D.eigen_range(lo, hi, dist);
  const double rad = std::sqrt(0.01 + 0.01);
  CHECK(lo == doctest::Approx(0.7 - rad));
  CHECK(hi == doctest::Approx(0.7 + rad));
  CHECK(dist == doctest::Approx(1.0 - (0.7 - rad)));
}

TEST_CASE("fields: advection field from tensor matches finite differences") {
  Mesh mesh = build_unit_square_mesh(16);
  TensorField D = TensorField::from_functions(
      mesh, [](const Vec2& x) { return 1.0 - 0.2 * x.x() * x.y(); },
      [](const Vec2& x) { return 0.1 * x.x(); },
      [](const Vec2& x) { return 0.9 + 0.05 * x.y(); });
  Rng rng(23);
  ScalarField u = verify::random_smooth_bump_field(mesh, rng);
  VectorField E = VectorField::nodal_plus_element(
      mesh,
      [&] {
        Eigen::Matrix<double, Eigen::Dynamic, 2> nv(mesh.vertex_count(), 2);
        Gauge g;
        for (int i = 0; i < mesh.vertex_count(); ++i)
          nv.row(i) = g.e_tilde(mesh.vertices[i]).transpose();
        return nv;
      }(),
      p1_gradient(u).element_values());
  AdvectionField v = AdvectionField::from_tensor_and_field(D, E);

  // central differences inside one element
  const int e = 100;
  const Vec2 x = mesh.centroids[e];
  const double d = mesh.cell_size * 1e-3;
  const double fd = (v.value(e, x + Vec2(d, 0)).x() - v.value(e, x - Vec2(d, 0)).x()) / (2 * d) +
                    (v.value(e, x + Vec2(0, d)).y() - v.value(e, x - Vec2(0, d)).y()) / (2 * d);
  CHECK(v.divergence(e, x) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("fields: relative interior error homogeneity") {
  Mesh mesh = build_unit_square_mesh(12);
  ScalarField ref = ScalarField::from_function(
      mesh, [](const Vec2& x) { return 0.5 + 0.2 * std::sin(3 * x.x()) * x.y(); });
  ScalarField scaled(mesh, 1.01 * ref.values());
  CHECK(relative_interior_error(scaled, ref) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(relative_interior_error(ref, ref) == 0.0);
}
