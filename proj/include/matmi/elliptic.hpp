#ifndef MATMI_ELLIPTIC_HPP
#define MATMI_ELLIPTIC_HPP

#include <limits>
#include <vector>

#include <Eigen/Sparse>

#include "matmi/fields.hpp"

namespace matmi {

// Admissibility bounds checked at assembly time. Defaults only require
// positivity of sigma and ellipticity of D with eigenvalues <= 1.
struct CoefficientBounds {
  double c1 = 1e-12;
  double c2 = std::numeric_limits<double>::infinity();
  double lambda = 1e-12;
};

// Assembled pure-Neumann system: stiffness for coefficient sigma*D plus a
// flux load. Constants span the null space; the load is compatible
// (entries sum to zero) by construction of the weak form.
struct NeumannSystem {
  const Mesh* mesh = nullptr;
  Eigen::SparseMatrix<double, Eigen::RowMajor> stiffness;
  Eigen::VectorXd load;
  Eigen::VectorXd lumped;    // mass weights defining the mesh mean
  Eigen::VectorXd inv_diag;  // Jacobi preconditioner
};

struct SolveStats {
  int iterations = 0;
  double residual = 0;                   // final |Ax-b| / |b|
  std::vector<double> residual_history;  // sampled every few iterations
};

// Stiffness only (load left zero): integral of sigma * D grad(phi_j).grad(phi_i).
NeumannSystem assemble_stiffness(const ScalarField& sigma, const TensorField& D,
                                 const CoefficientBounds& bounds = {});

// Load vector b_i = -(E_in, grad phi_i) for a flux field evaluated at
// element quadrature points.
Eigen::VectorXd assemble_flux_load(const Mesh& mesh,
                                   const std::function<Vec2(int elem, const Vec2&)>& e_in);

// Full system for grad.(sigma D grad u) = -grad.E_in with the zero-flux
// boundary condition.
NeumannSystem assemble(const ScalarField& sigma, const TensorField& D, const VectorField& e_in,
                       const CoefficientBounds& bounds = {});

// Jacobi-preconditioned conjugate gradients on the mean-zero subspace
// (iterates are re-projected every step; no node is pinned). Returns u with
// lumped-mass mean zero. `x0` optionally warm-starts the iteration.
ScalarField solve(const NeumannSystem& sys, double rel_tol, SolveStats* stats = nullptr,
                  const Eigen::VectorXd* x0 = nullptr);

// Same solver with a caller-supplied load (sys.load is ignored); lets one
// assembled stiffness serve many right-hand sides.
ScalarField solve_with_load(const NeumannSystem& sys, const Eigen::VectorXd& load,
                            double rel_tol, SolveStats* stats = nullptr,
                            const Eigen::VectorXd* x0 = nullptr);

}  // namespace matmi

#endif
