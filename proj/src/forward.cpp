#include "matmi/forward.hpp"

namespace matmi {

VectorField compute_E(const ForwardProblem& fp, const ScalarField& sigma, SolveStats* stats,
                      Eigen::VectorXd* warm_potential) {
  const Mesh& mesh = *fp.mesh;
  NeumannSystem sys = assemble_stiffness(sigma, *fp.D, fp.bounds);
  sys.load = assemble_flux_load(mesh, [&](int e, const Vec2& x) {
    return Vec2(sigma.at_point(e, x) * (fp.D->at_point(e, x) * fp.gauge.e_tilde(x)));
  });
  const Eigen::VectorXd* x0 =
      (warm_potential && warm_potential->size() == mesh.vertex_count()) ? warm_potential
                                                                        : nullptr;
  ScalarField u = solve(sys, fp.solver_tol, stats, x0);
  if (warm_potential) *warm_potential = u.values();

  Eigen::Matrix<double, Eigen::Dynamic, 2> nodal(mesh.vertex_count(), 2);
  for (int i = 0; i < mesh.vertex_count(); ++i)
    nodal.row(i) = fp.gauge.e_tilde(mesh.vertices[i]).transpose();
  VectorField grad_u = p1_gradient(u);
  return VectorField::nodal_plus_element(mesh, std::move(nodal), grad_u.element_values());
}

ScalarField internal_data_with_E(const ForwardProblem& fp, const ScalarField& sigma,
                                 const VectorField& E) {
  return weak_divergence_of(*fp.mesh, [&](int e, const Vec2& x) {
    return cross_with_b0(sigma.at_point(e, x) * (fp.D->at_point(e, x) * E.at_point(e, x)));
  });
}

ScalarField internal_data(const ForwardProblem& fp, const ScalarField& sigma) {
  return internal_data_with_E(fp, sigma, compute_E(fp, sigma));
}

}  // namespace matmi
