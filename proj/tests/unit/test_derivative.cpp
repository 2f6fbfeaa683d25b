#include <doctest.h>

#include <cmath>

#include "matmi/derivative.hpp"
#include "matmi/experiments.hpp"
#include "matmi/verify.hpp"

using namespace matmi;

TEST_CASE("derivative: zero increment maps to zero") {
  Mesh mesh = build_unit_square_mesh(12);
  TensorField D = paper_tensor(mesh);
  ForwardProblem fp{&mesh, &D, Gauge{}, 1e-10, CoefficientBounds{}};
  LinearizedState st(fp, paper_sigma(mesh));
  CHECK(l2_norm(st.apply(ScalarField::zero(mesh))) == 0.0);
  CHECK(l2_norm(st.apply_adjoint(ScalarField::zero(mesh))) == 0.0);
}

TEST_CASE("derivative: apply is homogeneous") {
  Mesh mesh = build_unit_square_mesh(16);
  TensorField D = paper_tensor(mesh);
  ForwardProblem fp{&mesh, &D, Gauge{}, 1e-10, CoefficientBounds{}};
  LinearizedState st(fp, paper_sigma(mesh), 1e-11);
  Rng rng(3);
  ScalarField h = verify::random_smooth_bump_field(mesh, rng);
  const double alpha = 3.25;
  ScalarField lhs = st.apply(ScalarField(mesh, alpha * h.values()));
  ScalarField rhs = st.apply(h);
  ScalarField diff(mesh, lhs.values() - alpha * rhs.values());
  CHECK(l2_norm(diff) / l2_norm(lhs) < 1e-9);
}

TEST_CASE("derivative: constant g has zero adjoint image") {
  Mesh mesh = build_unit_square_mesh(12);
  TensorField D = paper_tensor(mesh);
  ForwardProblem fp{&mesh, &D, Gauge{}, 1e-10, CoefficientBounds{}};
  LinearizedState st(fp, paper_sigma(mesh));
  ScalarField z = st.apply_adjoint(ScalarField::constant(mesh, 4.2));
  CHECK(l2_norm(z) < 1e-10);
}

TEST_CASE("derivative: adjoint identity at n=16") {
  auto r = verify::check_adjoint_identity(16, 50, 21);
  CHECK(r.pass);
}

TEST_CASE("derivative: Taylor remainder is second order at n=16") {
  auto r = verify::check_taylor_remainder(16);
  CHECK(r.pass);
  CHECK(r.measured > 1.8);
  CHECK(r.measured < 2.2);
}

TEST_CASE("derivative: adjoint direction decreases the data misfit") {
  Mesh mesh = build_unit_square_mesh(16);
  Phantom p = make_phantom("mild", mesh);
  ForwardProblem fp{&mesh, &p.D, Gauge{}, 1e-10,
                    CoefficientBounds{p.S.c1, p.S.c2, p.S.lambda}};
  ScalarField g = internal_data(fp, p.sigma_true);

  ScalarField sigma = ScalarField::constant(mesh, 0.2);
  LinearizedState st(fp, sigma);
  ScalarField F = st.internal_data();
  ScalarField r(mesh, F.values() - g.values());
  const double j0 = 0.5 * l2_inner(r, r);

  ScalarField d = st.apply_adjoint(r);
  for (double mu : {1e-4, 1e-3}) {
    ScalarField trial(mesh, sigma.values() - mu * d.values());
    ScalarField Ft = internal_data(fp, trial);
    ScalarField rt(mesh, Ft.values() - g.values());
    CHECK(0.5 * l2_inner(rt, rt) < j0);
  }
}
