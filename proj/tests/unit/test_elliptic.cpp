#include <doctest.h>

#include <cmath>

#include "matmi/elliptic.hpp"
#include "matmi/errors.hpp"
#include "matmi/rng.hpp"
#include "matmi/verify.hpp"

using namespace matmi;

namespace {

double flux_norm(const Mesh& mesh, const std::function<Vec2(int, const Vec2&)>& f) {
  double acc = 0;
  for (int e = 0; e < mesh.triangle_count(); ++e)
    for (int q = 0; q < Mesh::kTriQuadPoints; ++q)
      acc += mesh.areas[e] / 3.0 * f(e, mesh.tri_quad_point(e, q)).squaredNorm();
  return std::sqrt(acc);
}

double grad_l2(const Mesh& mesh, const ScalarField& u) {
  VectorField g = p1_gradient(u);
  double acc = 0;
  for (int e = 0; e < mesh.triangle_count(); ++e)
    acc += mesh.areas[e] * g.element_values().row(e).squaredNorm();
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("elliptic: unit-coefficient stiffness is the five-point stencil") {
  Mesh mesh = build_unit_square_mesh(2);
  NeumannSystem sys =
      assemble_stiffness(ScalarField::constant(mesh, 1.0), TensorField::identity(mesh));
  // center vertex of the 3x3 grid
  const int c = 4;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(9);
  for (int j = 0; j < 9; ++j) row[j] = sys.stiffness.coeff(c, j);
  CHECK(row[4] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(row[1] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(row[3] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(row[5] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(row[7] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(row[0]) + std::abs(row[8]) < 1e-14);

  SUBCASE("linear in sigma") {
    NeumannSystem sys2 =
        assemble_stiffness(ScalarField::constant(mesh, 2.0), TensorField::identity(mesh));
    Eigen::SparseMatrix<double, Eigen::RowMajor> diff = sys2.stiffness - 2.0 * sys.stiffness;
    CHECK(diff.coeffs().cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("elliptic: system invariants") {
  Mesh mesh = build_unit_square_mesh(16);
  ScalarField sigma = ScalarField::from_function(
      mesh, [](const Vec2& x) { return 0.4 + 0.2 * std::sin(2 * x.x() + x.y()); });
  TensorField D = TensorField::from_functions(
      mesh, [](const Vec2& x) { return 1.0 - 0.1 * x.x(); },
      [](const Vec2& x) { return 0.05 * x.y(); }, [](const Vec2&) { return 0.9; });
  Gauge gauge;
  NeumannSystem sys = assemble(
      sigma, D,
      VectorField::from_function(mesh, [&](const Vec2& x) { return gauge.e_tilde(x); }),
      CoefficientBounds{0.1, 1.0, 0.3});

  // symmetry
  Eigen::SparseMatrix<double, Eigen::RowMajor> diff =
      sys.stiffness - Eigen::SparseMatrix<double, Eigen::RowMajor>(sys.stiffness.transpose());
  CHECK(diff.coeffs().cwiseAbs().maxCoeff() < 1e-12);
  // constants in the null space
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.vertex_count());
  CHECK((sys.stiffness * ones).cwiseAbs().maxCoeff() < 1e-10);
  // compatible load
  CHECK(std::abs(sys.load.sum()) < 1e-10);
}

TEST_CASE("elliptic: coefficient bounds are enforced with a node index") {
  Mesh mesh = build_unit_square_mesh(4);
  Eigen::VectorXd vals = Eigen::VectorXd::Constant(mesh.vertex_count(), 0.5);
  vals[7] = -0.1;
  try {
    assemble_stiffness(ScalarField(mesh, vals), TensorField::identity(mesh),
                       CoefficientBounds{0.1, 1.0, 0.3});
    FAIL("expected CoefficientBoundError");
  } catch (const CoefficientBoundError& e) {
    CHECK(e.node_index == 7);
  }

  TensorField bad = TensorField::from_functions(
      mesh, [](const Vec2&) { return 1.4; }, [](const Vec2&) { return 0.0; },
      [](const Vec2&) { return 1.0; });
  CHECK_THROWS_AS(
      assemble_stiffness(ScalarField::constant(mesh, 0.5), bad, CoefficientBounds{}),
      CoefficientBoundError);
}

TEST_CASE("elliptic: zero load gives the zero solution") {
  Mesh mesh = build_unit_square_mesh(8);
  NeumannSystem sys =
      assemble_stiffness(ScalarField::constant(mesh, 1.0), TensorField::identity(mesh));
  ScalarField u = solve(sys, 1e-10);
  CHECK(u.values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("elliptic: gradient load recovers the potential") {
  Mesh mesh = build_unit_square_mesh(32);
  ScalarField f = ScalarField::from_function(
      mesh, [](const Vec2& x) { return x.x() * x.y(); });
  NeumannSystem sys =
      assemble(ScalarField::constant(mesh, 1.0), TensorField::identity(mesh), p1_gradient(f));
  SolveStats st;
  ScalarField u = solve(sys, 1e-10, &st);
  CHECK(st.residual <= 1e-10);

  const Eigen::VectorXd m = lumped_mass(mesh);
  const double mean = m.dot(f.values()) / m.sum();
  ScalarField want(mesh, -(f.values().array() - mean).matrix());
  ScalarField diff(mesh, u.values() - want.values());
  CHECK(l2_norm(diff) < 1e-8);
  // mesh mean of the solution is zero
  CHECK(std::abs(m.dot(u.values())) / m.sum() < 1e-12);
}

TEST_CASE("elliptic: energy estimate over random admissible coefficients") {
  Mesh mesh = build_unit_square_mesh(16);
  const double c1 = 0.3, lambda = 0.5;
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    ScalarField bump = verify::random_smooth_bump_field(mesh, rng);
    const double amp = bump.values().cwiseAbs().maxCoeff();
    ScalarField sigma(mesh, Eigen::VectorXd::Constant(mesh.vertex_count(), 0.9) +
                                (0.5 / amp) * bump.values());
    TensorField D = TensorField::from_functions(
        mesh, [](const Vec2& x) { return 0.75 + 0.15 * std::sin(x.x()); },
        [](const Vec2&) { return 0.05; },
        [](const Vec2& x) { return 0.8 + 0.1 * std::cos(2 * x.y()); });
    Eigen::Matrix<double, Eigen::Dynamic, 2> ev(mesh.vertex_count(), 2);
    for (int i = 0; i < mesh.vertex_count(); ++i)
      ev.row(i) = Vec2(rng.next_symmetric(), rng.next_symmetric()).transpose();
    VectorField e_in = VectorField::nodal(mesh, std::move(ev));

    NeumannSystem sys = assemble(sigma, D, e_in, CoefficientBounds{c1, 2.0, lambda});
    ScalarField u = solve(sys, 1e-10);
    const double rhs_norm =
        flux_norm(mesh, [&](int e, const Vec2& x) { return e_in.at_point(e, x); });
    CHECK(grad_l2(mesh, u) <= (1.0 + 1e-6) / (c1 * lambda) * rhs_norm);
  }
}

TEST_CASE("elliptic: superposition and warm-start invariance") {
  Mesh mesh = build_unit_square_mesh(16);
  ScalarField sigma = ScalarField::constant(mesh, 0.7);
  TensorField D = TensorField::identity(mesh);
  Gauge gauge;
  VectorField a = VectorField::from_function(mesh, [&](const Vec2& x) {
    return gauge.e_tilde(x);
  });
  VectorField b = VectorField::from_function(mesh, [](const Vec2& x) {
    return Vec2(std::sin(3 * x.y()), x.x());
  });

  const double tol = 1e-11;
  NeumannSystem sys_a = assemble(sigma, D, a);
  NeumannSystem sys_b = assemble(sigma, D, b);
  ScalarField ua = solve(sys_a, tol);
  ScalarField ub = solve(sys_b, tol);

  NeumannSystem sys_ab = sys_a;
  sys_ab.load = sys_a.load + sys_b.load;
  ScalarField uab = solve(sys_ab, tol);
  ScalarField diff(mesh, uab.values() - ua.values() - ub.values());
  CHECK(l2_norm(diff) < 2e-9);

  // adding a constant to the warm start does not change the answer
  Eigen::VectorXd shifted = ua.values().array() + 5.0;
  ScalarField ua2 = solve(sys_a, tol, nullptr, &shifted);
  ScalarField d2(mesh, ua2.values() - ua.values());
  CHECK(l2_norm(d2) < 1e-9);
}
