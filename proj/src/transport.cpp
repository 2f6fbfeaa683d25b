#include "matmi/transport.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "matmi/errors.hpp"

namespace matmi {

std::vector<int> classify_inflow(const Mesh& mesh, const AdvectionField& v, double tol_flux) {
  std::vector<int> edges;
  for (int k = 0; k < static_cast<int>(mesh.boundary_edges.size()); ++k) {
    const auto& be = mesh.boundary_edges[k];
    const Vec2 mid = 0.5 * (mesh.vertices[be.a] + mesh.vertices[be.b]);
    if (v.value(be.elem, mid).dot(be.normal) < -tol_flux) edges.push_back(k);
  }
  return edges;
}

std::vector<int> classify_inflow(const Mesh& mesh, const VectorField& v, double tol_flux) {
  return classify_inflow(mesh, AdvectionField::from_vector_field(v), tol_flux);
}

double resolve_eps(const TransportProblem& tp) {
  if (tp.eps >= 0) return tp.eps;
  const double h = tp.mesh->cell_size;
  return tp.c_eps * h * h * tp.velocity.max_speed();
}

ScalarField solve_transport(const TransportProblem& tp) {
  const Mesh& mesh = *tp.mesh;
  const int n = mesh.vertex_count();
  const double max_speed = tp.velocity.max_speed();
  const double eps = resolve_eps(tp);
  const std::vector<int> inflow = classify_inflow(mesh, tp.velocity, tp.tol_flux);

  if (eps <= 0 && max_speed <= 0)
    throw DegenerateTransportError("transport: v == 0 and eps == 0");
  if (eps <= 0 && inflow.empty())
    throw DegenerateTransportError(
        "transport: empty inflow set requires artificial diffusion (eps > 0)");

  // Nodes carrying strong Dirichlet data.
  std::vector<char> is_bc(n, 0);
  if (eps > 0) {
    for (int i = 0; i < n; ++i) is_bc[i] = mesh.vertex_on_boundary[i];
  } else {
    for (int k : inflow) {
      is_bc[mesh.boundary_edges[k].a] = 1;
      is_bc[mesh.boundary_edges[k].b] = 1;
    }
  }

  const Eigen::VectorXd m = lumped_mass(mesh);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.triangle_count() * 12 + n);

  const auto& bary = Mesh::tri_quad_barycentric();
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const auto& bg = mesh.basis_gradients[e];
    const double area = mesh.areas[e];
    const double wq = area / 3.0;

    // element diameter and centroid speed for the SUPG parameter
    double h_t = 0;
    for (int k = 0; k < 3; ++k) {
      const Vec2 d = mesh.vertex_of(e, k) - mesh.vertex_of(e, (k + 1) % 3);
      h_t = std::max(h_t, d.norm());
    }
    const double speed = tp.velocity.value(e, mesh.centroids[e]).norm();
    double tau = 0;
    if (speed >= 1e-12 * max_speed) {
      const double denom = 2.0 * speed + (h_t > 0 ? eps / h_t : 0.0);
      if (denom > 1e-300) tau = tp.tau_scale * h_t / denom;
    }

    for (int q = 0; q < Mesh::kTriQuadPoints; ++q) {
      const Vec2 x = mesh.tri_quad_point(e, q);
      const Vec2 vq = tp.velocity.value(e, x);
      const double divq = tp.velocity.divergence(e, x);
      const double gq = tp.source.at_quad(e, q);

      for (int i = 0; i < 3; ++i) {
        if (is_bc[t[i]]) continue;
        const double v_dot_gi = vq.dot(bg.col(i));
        for (int j = 0; j < 3; ++j) {
          // Galerkin advection in conservative form (interior rows have no
          // boundary term since phi_i vanishes on the boundary).
          double a = -wq * bary[q][j] * v_dot_gi;
          // SUPG: (v.grad sigma + sigma div v  - g, tau v.grad phi_i)
          a += tau * wq * (vq.dot(bg.col(j)) + divq * bary[q][j]) * v_dot_gi;
          trip.emplace_back(t[i], t[j], a);
        }
        rhs[t[i]] += tau * wq * gq * v_dot_gi;
      }
    }

    if (eps > 0) {
      for (int i = 0; i < 3; ++i) {
        if (is_bc[t[i]]) continue;
        for (int j = 0; j < 3; ++j)
          trip.emplace_back(t[i], t[j], eps * area * bg.col(j).dot(bg.col(i)));
      }
    }
  }

  // Natural outflow flux for non-Dirichlet boundary rows (eps == 0 path).
  for (const auto& be : mesh.boundary_edges) {
    const double half = 0.5 * be.length;
    for (int q = 0; q < Mesh::kEdgeQuadPoints; ++q) {
      const double s = Mesh::edge_quad_positions()[q];
      const double flux =
          tp.velocity.value(be.elem, mesh.edge_quad_point(be, q)).dot(be.normal);
      const double phi[2] = {1.0 - s, s};
      const int idx[2] = {be.a, be.b};
      for (int i = 0; i < 2; ++i) {
        if (is_bc[idx[i]]) continue;
        for (int j = 0; j < 2; ++j)
          trip.emplace_back(idx[i], idx[j], half * flux * phi[i] * phi[j]);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    if (is_bc[i]) {
      trip.emplace_back(i, i, 1.0);
      rhs[i] = tp.inflow_data[i];
    } else {
      rhs[i] += m[i] * tp.source[i];
    }
  }

  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw DegenerateTransportError("transport: factorization failed (singular system)");
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SolverError("transport: back substitution failed");

  const double res = (A * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (!(res <= tp.solver_tol))
    throw SolverError("transport: residual " + std::to_string(res) + " above tolerance");

  return ScalarField(mesh, std::move(x));
}

}  // namespace matmi
