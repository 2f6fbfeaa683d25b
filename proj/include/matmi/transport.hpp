#ifndef MATMI_TRANSPORT_HPP
#define MATMI_TRANSPORT_HPP

#include "matmi/fields.hpp"

namespace matmi {

// Stationary conservative transport grad.(sigma v) = g with inflow data.
// The discrete advection operator is assemble_divergence_form(mesh, v), so
// its action on nodal sigma agrees exactly with the weak divergence used to
// synthesize internal data. Stabilization: artificial diffusion eps (auto:
// c_eps * h^2 * max|v|) plus streamline upwinding with
// tau = tau_scale * h_T / (2 |v|_T + eps / h_T).
struct TransportProblem {
  const Mesh* mesh = nullptr;
  AdvectionField velocity;
  ScalarField source;       // g
  ScalarField inflow_data;  // sigma_*; imposed on the whole boundary when eps > 0
  double eps = -1;          // artificial diffusion; negative selects the auto formula
  double c_eps = 0.5;
  double tau_scale = 1.0;
  double tol_flux = 1e-12;  // characteristic-edge tie break
  double solver_tol = 1e-8;
};

// Boundary edges whose midpoint flux v.nu is below -tol_flux.
std::vector<int> classify_inflow(const Mesh& mesh, const AdvectionField& v,
                                 double tol_flux = 1e-12);
std::vector<int> classify_inflow(const Mesh& mesh, const VectorField& v,
                                 double tol_flux = 1e-12);

// Artificial diffusion actually used for a problem (resolves the auto rule).
double resolve_eps(const TransportProblem& tp);

// SUPG-stabilized P1 solve. Dirichlet values are imposed strongly: on every
// boundary node when eps > 0, on inflow-edge nodes otherwise. Throws
// DegenerateTransportError when no boundary data applies and eps == 0.
ScalarField solve_transport(const TransportProblem& tp);

}  // namespace matmi

#endif
