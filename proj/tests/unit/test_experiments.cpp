#include <doctest.h>

#include <cmath>

#include "matmi/errors.hpp"
#include "matmi/experiments.hpp"

using namespace matmi;

TEST_CASE("experiments: radial factor values") {
  CHECK(paper_sigma_value(Vec2(0.5, 0.5)) == 0.6);
  CHECK(paper_sigma_value(Vec2(0, 0)) == 0.2);
  // midpoint of the blend: s = 1/2, quintic gives 0.4*0.125*4 + 0.2 = 0.4
  CHECK(paper_sigma_value(Vec2(0.5 + 0.29, 0.5)) == doctest::Approx(0.4).epsilon(1e-12));

  // continuity across both blend radii
  for (double r : {0.12, 0.46}) {
    const double lo = paper_sigma_value(Vec2(0.5 + r - 1e-9, 0.5));
    const double hi = paper_sigma_value(Vec2(0.5 + r + 1e-9, 0.5));
    CHECK(std::abs(lo - hi) < 1e-6);
  }
}

TEST_CASE("experiments: radial symmetry and range") {
  Mesh mesh = build_unit_square_mesh(16);
  ScalarField s = paper_sigma(mesh);
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    CHECK(s[i] >= 0.2);
    CHECK(s[i] <= 0.6);
  }
  // vertices at equal distance from the center get equal values
  const double d = 3.0 / 16.0;
  const double a = paper_sigma_value(Vec2(0.5 + d, 0.5));
  CHECK(paper_sigma_value(Vec2(0.5 - d, 0.5)) == a);
  CHECK(paper_sigma_value(Vec2(0.5, 0.5 + d)) == a);
  CHECK(paper_sigma_value(Vec2(0.5, 0.5 - d)) == a);
}

TEST_CASE("experiments: diffusion tensor bumps") {
  Mesh mesh = build_unit_square_mesh(64);
  int clipped = -1;
  TensorField D = paper_tensor(mesh, &clipped);
  CHECK(clipped == 0);

  // identity far away from every bump
  Eigen::Matrix2d corner = D.at_node(0);
  CHECK((corner - Eigen::Matrix2d::Identity()).norm() < 1e-14);

  double lo, hi, dist;
  D.eigen_range(lo, hi, dist);
  CHECK(lo >= 0.4);
  CHECK(hi <= 1.0 + 1e-12);
  CHECK(dist <= 0.5);
  CHECK(dist > 0.1);  // the anisotropy is not degenerate

  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const Eigen::Matrix2d Dn = D.at_node(i);
    CHECK(Dn.determinant() > 0);
    CHECK(Dn.trace() < 2.0 + 1e-12);
  }
}

TEST_CASE("experiments: noise operator is an exact isometry scaler") {
  Mesh mesh = build_unit_square_mesh(24);
  ScalarField g = paper_sigma(mesh);

  ScalarField g0 = add_noise(g, 0.0, 5);
  for (int i = 0; i < mesh.vertex_count(); ++i) CHECK(g0[i] == g[i]);

  ScalarField gd = add_noise(g, 0.24, 5);
  ScalarField diff(mesh, gd.values() - g.values());
  CHECK(l2_norm(diff) / l2_norm(g) == doctest::Approx(0.24).epsilon(1e-12));

  ScalarField ge = add_noise(g, 0.24, 6);
  ScalarField diff2(mesh, ge.values() - g.values());
  CHECK(l2_norm(diff2) / l2_norm(g) == doctest::Approx(0.24).epsilon(1e-12));
  CHECK((gd.values() - ge.values()).cwiseAbs().maxCoeff() > 1e-6);

  ScalarField again = add_noise(g, 0.24, 5);
  for (int i = 0; i < mesh.vertex_count(); ++i) CHECK(again[i] == gd[i]);

  CHECK_THROWS_AS(add_noise(g, -0.1, 1), InputError);
}

TEST_CASE("experiments: relative error metric") {
  Mesh mesh = build_unit_square_mesh(16);
  ScalarField t = paper_sigma(mesh);
  CHECK(relative_l2_error(t, t) == 0.0);
  CHECK(relative_l2_error(ScalarField(mesh, 1.01 * t.values()), t) ==
        doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("experiments: initial-guess baseline error is pinned") {
  Mesh mesh = build_unit_square_mesh(128);
  ScalarField t = paper_sigma(mesh);
  const double baseline = relative_l2_error(ScalarField::constant(mesh, 0.2), t);

  // continuum quadrature of the same ratio on a dense grid
  const int nq = 1200;
  double num = 0, den = 0;
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) {
      const Vec2 x((i + 0.5) / nq, (j + 0.5) / nq);
      const double s = paper_sigma_value(x);
      num += (0.2 - s) * (0.2 - s);
      den += s * s;
    }
  const double continuum = std::sqrt(num / den);
  CHECK(baseline == doctest::Approx(continuum).epsilon(2e-3));

  // regression pin of the discrete value
  CHECK(baseline == doctest::Approx(0.53559).epsilon(1e-4));
}

TEST_CASE("experiments: phantom registry") {
  Mesh mesh = build_unit_square_mesh(8);
  for (const auto& name : phantom_names()) {
    Phantom p = make_phantom(name, mesh);
    CHECK(p.name == name);
    CHECK(p.S.contains(p.S.project(p.sigma_true)));
  }
  CHECK_THROWS_AS(make_phantom("nonesuch", mesh), InputError);
}
