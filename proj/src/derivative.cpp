#include "matmi/derivative.hpp"

namespace matmi {

LinearizedState::LinearizedState(const ForwardProblem& fp, ScalarField sigma, double rel_tol,
                                 Eigen::VectorXd* warm_potential)
    : fp_(fp), rel_tol_(rel_tol), sigma_(std::move(sigma)) {
  sys_ = assemble_stiffness(sigma_, *fp_.D, fp_.bounds);
  sys_.load = assemble_flux_load(*fp_.mesh, [&](int e, const Vec2& x) {
    return Vec2(sigma_.at_point(e, x) * (fp_.D->at_point(e, x) * fp_.gauge.e_tilde(x)));
  });
  const Eigen::VectorXd* x0 =
      (warm_potential && warm_potential->size() == fp_.mesh->vertex_count()) ? warm_potential
                                                                             : nullptr;
  ScalarField u = solve(sys_, fp_.solver_tol, nullptr, x0);
  if (warm_potential) *warm_potential = u.values();

  const Mesh& mesh = *fp_.mesh;
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodal(mesh.vertex_count(), 2);
  for (int i = 0; i < mesh.vertex_count(); ++i)
    nodal.row(i) = fp_.gauge.e_tilde(mesh.vertices[i]).transpose();
  E_ = VectorField::nodal_plus_element(mesh, std::move(nodal),
                                       p1_gradient(u).element_values());
}

ScalarField LinearizedState::apply(const ScalarField& h) const {
  const Mesh& mesh = *fp_.mesh;
  Eigen::VectorXd load = assemble_flux_load(mesh, [&](int e, const Vec2& x) {
    return Vec2(h.at_point(e, x) * (fp_.D->at_point(e, x) * E_.at_point(e, x)));
  });
  ScalarField phi = solve_with_load(sys_, load, rel_tol_);
  VectorField grad_phi = p1_gradient(phi);

  return weak_divergence_of(mesh, [&](int e, const Vec2& x) {
    const Eigen::Matrix2d D = fp_.D->at_point(e, x);
    const Vec2 w = sigma_.at_point(e, x) * (D * grad_phi.at_centroid(e)) +
                   h.at_point(e, x) * (D * E_.at_point(e, x));
    return cross_with_b0(w);
  });
}

ScalarField LinearizedState::apply_adjoint(const ScalarField& g, Eigen::VectorXd* warm) const {
  const Mesh& mesh = *fp_.mesh;
  VectorField grad_g = p1_gradient(g);

  Eigen::VectorXd load = assemble_flux_load(mesh, [&](int e, const Vec2& x) {
    return Vec2(sigma_.at_point(e, x) *
                (fp_.D->at_point(e, x) * b0_cross(grad_g.at_centroid(e))));
  });
  const Eigen::VectorXd* x0 = (warm && warm->size() == mesh.vertex_count()) ? warm : nullptr;
  ScalarField Phi = solve_with_load(sys_, load, rel_tol_, nullptr, x0);
  if (warm) *warm = Phi.values();
  VectorField grad_Phi = p1_gradient(Phi);

  // -(D E).grad Phi - grad g.(D E x B0), evaluated per element and lumped.
  Eigen::VectorXd r = Eigen::VectorXd::Zero(mesh.vertex_count());
  const auto& bary = Mesh::tri_quad_barycentric();
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const double wq = mesh.areas[e] / 3.0;
    const Vec2 gp = grad_Phi.at_centroid(e);
    const Vec2 gg = grad_g.at_centroid(e);
    for (int q = 0; q < Mesh::kTriQuadPoints; ++q) {
      const Vec2 DE = fp_.D->at_quad(e, q) * E_.at_quad(e, q);
      const double psi = -DE.dot(gp) - gg.dot(cross_with_b0(DE));
      for (int k = 0; k < 3; ++k) r[t[k]] += wq * psi * bary[q][k];
    }
  }
  Eigen::VectorXd m = lumped_mass(mesh);
  return ScalarField(mesh, r.cwiseQuotient(m));
}

ScalarField LinearizedState::internal_data() const {
  return internal_data_with_E(fp_, sigma_, E_);
}

}  // namespace matmi
