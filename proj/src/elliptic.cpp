#include "matmi/elliptic.hpp"

#include <cmath>

#include "matmi/errors.hpp"

namespace matmi {

NeumannSystem assemble_stiffness(const ScalarField& sigma, const TensorField& D,
                                 const CoefficientBounds& bounds) {
  const Mesh& mesh = sigma.mesh();
  const double tol = 1e-12;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (!(sigma[i] >= bounds.c1 - tol && sigma[i] <= bounds.c2 + tol))
      throw CoefficientBoundError("sigma out of [c1, c2]", i);
    double lo, hi;
    D.eigenvalues_at_node(i, lo, hi);
    if (!(lo >= bounds.lambda - tol && hi <= 1.0 + tol))
      throw CoefficientBoundError("tensor eigenvalues out of [lambda, 1]", i);
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.triangle_count() * 9);
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const auto& bg = mesh.basis_gradients[e];
    const double wq = mesh.areas[e] / 3.0;
    for (int q = 0; q < Mesh::kTriQuadPoints; ++q) {
      const double s = sigma.at_quad(e, q);
      const Eigen::Matrix2d Dq = D.at_quad(e, q);
      for (int j = 0; j < 3; ++j) {
        const Vec2 Dg = Dq * bg.col(j);
        for (int i = 0; i < 3; ++i)
          trip.emplace_back(t[i], t[j], wq * s * Dg.dot(bg.col(i)));
      }
    }
  }

  NeumannSystem sys;
  sys.mesh = &mesh;
  sys.stiffness.resize(mesh.vertex_count(), mesh.vertex_count());
  sys.stiffness.setFromTriplets(trip.begin(), trip.end());
  sys.load = Eigen::VectorXd::Zero(mesh.vertex_count());
  sys.lumped = lumped_mass(mesh);
  sys.inv_diag = sys.stiffness.diagonal().cwiseInverse();
  return sys;
}

Eigen::VectorXd assemble_flux_load(const Mesh& mesh,
                                   const std::function<Vec2(int, const Vec2&)>& e_in) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.vertex_count());
  double max_term = 0;
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const auto& bg = mesh.basis_gradients[e];
    const double wq = mesh.areas[e] / 3.0;
    for (int q = 0; q < Mesh::kTriQuadPoints; ++q) {
      const Vec2 v = e_in(e, mesh.tri_quad_point(e, q));
      for (int k = 0; k < 3; ++k) {
        const double term = wq * v.dot(bg.col(k));
        b[t[k]] -= term;
        max_term = std::max(max_term, std::abs(term));
      }
    }
  }
  // A load that cancels to rounding noise is an exact zero analytically
  // (e.g. divergence-free flux tangent to the boundary); snap it so the
  // solver is not asked to resolve noise.
  if (b.lpNorm<Eigen::Infinity>() <= 1e-13 * max_term) b.setZero();
  return b;
}

NeumannSystem assemble(const ScalarField& sigma, const TensorField& D, const VectorField& e_in,
                       const CoefficientBounds& bounds) {
  NeumannSystem sys = assemble_stiffness(sigma, D, bounds);
  sys.load = assemble_flux_load(
      sigma.mesh(), [&e_in](int e, const Vec2& x) { return e_in.at_point(e, x); });
  return sys;
}

ScalarField solve(const NeumannSystem& sys, double rel_tol, SolveStats* stats,
                  const Eigen::VectorXd* x0) {
  return solve_with_load(sys, sys.load, rel_tol, stats, x0);
}

ScalarField solve_with_load(const NeumannSystem& sys, const Eigen::VectorXd& load,
                            double rel_tol, SolveStats* stats, const Eigen::VectorXd* x0) {
  const Mesh& mesh = *sys.mesh;
  const int n = mesh.vertex_count();
  const double mass_total = sys.lumped.sum();

  auto project = [&](Eigen::VectorXd& x) {
    const double mean = sys.lumped.dot(x) / mass_total;
    x.array() -= mean;
  };

  const double bnorm = load.norm();
  if (bnorm == 0) {
    if (stats) *stats = SolveStats{};
    return ScalarField::zero(mesh);
  }

  Eigen::VectorXd x = x0 ? *x0 : Eigen::VectorXd::Zero(n);
  if (x0 && x.size() != n) throw InputError("solve: warm start has wrong size");
  project(x);

  Eigen::VectorXd r = load - sys.stiffness * x;
  Eigen::VectorXd z = sys.inv_diag.cwiseProduct(r);
  project(z);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  const int max_iter = 40 * static_cast<int>(std::sqrt(static_cast<double>(n))) + 2000;
  SolveStats st;
  double res = r.norm() / bnorm;
  Eigen::VectorXd Ap(n);
  int k = 0;
  for (; k < max_iter && res > rel_tol; ++k) {
    Ap.noalias() = sys.stiffness * p;
    const double pAp = p.dot(Ap);
    if (pAp <= 0) throw SolverError("neumann solve: lost positive definiteness");
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    z = sys.inv_diag.cwiseProduct(r);
    project(z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    res = r.norm() / bnorm;
    if (k % 25 == 0) st.residual_history.push_back(res);
  }
  st.iterations = k;
  st.residual = res;
  st.residual_history.push_back(res);
  if (stats) *stats = st;
  if (res > rel_tol) {
    std::string hist;
    for (double h : st.residual_history) hist += " " + std::to_string(h);
    throw SolverError("neumann solve: no convergence after " + std::to_string(k) +
                      " iterations; residual history:" + hist);
  }
  project(x);
  return ScalarField(mesh, std::move(x));
}

}  // namespace matmi
