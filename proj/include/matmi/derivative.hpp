#ifndef MATMI_DERIVATIVE_HPP
#define MATMI_DERIVATIVE_HPP

#include "matmi/forward.hpp"

namespace matmi {

// Linearization of the forward map at a fixed sigma. The stiffness matrix for
// coefficient sigma*D and the base field E are assembled once and shared by
// every apply/apply_adjoint call (each costs a single Neumann solve).
class LinearizedState {
 public:
  LinearizedState(const ForwardProblem& fp, ScalarField sigma, double rel_tol = 1e-8,
                  Eigen::VectorXd* warm_potential = nullptr);

  const ScalarField& sigma() const { return sigma_; }
  const VectorField& electric_field() const { return E_; }
  const Mesh& mesh() const { return *fp_.mesh; }

  // DF[sigma](h): solve for phi_h with flux h*D*E, then take the weak
  // divergence of (sigma D grad phi_h + h D E) x B0.
  ScalarField apply(const ScalarField& h) const;

  // DF[sigma]^*(g): solve for Phi_g with flux sigma*D*(B0 x grad g), then
  // evaluate -(D E).grad Phi_g - grad g.(D E x B0), mass-lumped to nodes.
  ScalarField apply_adjoint(const ScalarField& g, Eigen::VectorXd* warm = nullptr) const;

  // Internal data at the base point, reusing the cached E.
  ScalarField internal_data() const;

 private:
  ForwardProblem fp_;
  double rel_tol_;
  ScalarField sigma_;
  VectorField E_;
  NeumannSystem sys_;
};

inline ScalarField df_apply(const LinearizedState& st, const ScalarField& h) {
  return st.apply(h);
}
inline ScalarField df_adjoint(const LinearizedState& st, const ScalarField& g) {
  return st.apply_adjoint(g);
}

}  // namespace matmi

#endif
