#ifndef MATMI_FORWARD_HPP
#define MATMI_FORWARD_HPP

#include "matmi/elliptic.hpp"
#include "matmi/fields.hpp"

namespace matmi {

// Quasi-static forward problem on a fixed mesh with known tensor D.
// B0 = B1 = (0,0,1); the gauge field supplies curl Etilde = 1.
struct ForwardProblem {
  const Mesh* mesh = nullptr;
  const TensorField* D = nullptr;
  Gauge gauge;
  double solver_tol = 1e-10;
  CoefficientBounds bounds;
};

// E = interp(Etilde) + grad(u), where u solves the Neumann problem with
// flux load sigma * D * Etilde. The nodal part carries the gauge field, the
// element part the potential gradient, so the per-element curl is exactly 1.
// `warm_potential` (in/out) seeds the CG iteration and receives the solution.
VectorField compute_E(const ForwardProblem& fp, const ScalarField& sigma,
                      SolveStats* stats = nullptr, Eigen::VectorXd* warm_potential = nullptr);

// Internal data F(sigma): weak divergence of (sigma D E) x B0, with the
// product evaluated at quadrature points.
ScalarField internal_data(const ForwardProblem& fp, const ScalarField& sigma);

// Same when E was already computed for this sigma.
ScalarField internal_data_with_E(const ForwardProblem& fp, const ScalarField& sigma,
                                 const VectorField& E);

}  // namespace matmi

#endif
