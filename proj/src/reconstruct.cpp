#include "matmi/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "matmi/errors.hpp"
#include "matmi/rng.hpp"

namespace matmi {

namespace {

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// L2 norm of the elementwise gradient and sup of |grad| per element.
void gradient_norms(const ScalarField& f, double& l2, double& sup) {
  const Mesh& mesh = f.mesh();
  VectorField g = p1_gradient(f);
  double acc = 0;
  sup = 0;
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const double n = g.element_values().row(e).norm();
    acc += mesh.areas[e] * n * n;
    sup = std::max(sup, n);
  }
  l2 = std::sqrt(acc);
}

void check_divergence(const std::vector<double>& residuals, int k) {
  const int window = 5;
  if (static_cast<int>(residuals.size()) > window) {
    const double past = residuals[residuals.size() - 1 - window];
    if (residuals.back() > 10.0 * past)
      throw SolverError("reconstruction diverged at iteration " + std::to_string(k) +
                        ": residual grew 10x over " + std::to_string(window) + " iterations");
  }
}

}  // namespace

ScalarField AdmissibleSet::project(const ScalarField& sigma) const {
  const Mesh& mesh = sigma.mesh();
  Eigen::VectorXd v = sigma.values();
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (mesh.vertex_on_boundary[i])
      v[i] = sigma0[i];
    else
      v[i] = std::clamp(v[i], c1, c2);
  }
  ScalarField alpha(mesh, v - sigma0.values());
  const double na = l2_norm(alpha);
  if (na > c3) {
    const double scale = c3 / na;
    v = sigma0.values() + scale * alpha.values();
  }
  return ScalarField(mesh, std::move(v));
}

AdmissibleSet::Membership AdmissibleSet::check(const ScalarField& sigma, double tol) const {
  const Mesh& mesh = sigma.mesh();
  Membership m;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (mesh.vertex_on_boundary[i]) {
      if (std::abs(sigma[i] - sigma0[i]) > tol) m.boundary_ok = false;
    } else if (sigma[i] < c1 - tol || sigma[i] > c2 + tol) {
      m.bounds_ok = false;
    }
  }
  ScalarField alpha(mesh, sigma.values() - sigma0.values());
  const double na = l2_norm(alpha);
  if (na > c3 * (1.0 + 1e-12) + tol) m.ball_ok = false;
  double gl2, gsup;
  gradient_norms(sigma, gl2, gsup);
  if (gsup > K * (1.0 + 1e-9) + tol) m.gradient_ok = false;
  double al2, asup;
  gradient_norms(alpha, al2, asup);
  if (al2 > L * na + tol) m.ratio_ok = false;
  return m;
}

ReconstructionResult quasi_newton_run(const ForwardProblem& fp, const ScalarField& g_data,
                                      const AdmissibleSet& S, const ReconstructionConfig& cfg,
                                      const ScalarField* truth) {
  const Mesh& mesh = *fp.mesh;
  if (!g_data.same_mesh(S.sigma0)) throw InputError("quasi_newton_run: mesh mismatch");

  ForwardProblem fpi = fp;
  fpi.solver_tol = cfg.solver_tol;

  const Eigen::VectorXd m = lumped_mass(mesh);
  const double g_norm = interior_l2_norm(g_data);
  if (g_norm == 0) throw InputError("quasi_newton_run: zero data field");

  ScalarField sigma = S.project(cfg.initial ? *cfg.initial : S.sigma0);

  IterationLog log;
  ReconstructionResult out{sigma, {}};
  std::vector<double> residuals;
  Eigen::VectorXd warm_u;
  double prev_err = std::numeric_limits<double>::quiet_NaN();
  const auto t0 = std::chrono::steady_clock::now();

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    VectorField E = compute_E(fpi, sigma, nullptr, &warm_u);
    AdvectionField vel = AdvectionField::from_tensor_and_field(*fp.D, E);
    Eigen::SparseMatrix<double> A = assemble_divergence_form(mesh, vel);
    ScalarField F(mesh, (A * sigma.values()).cwiseQuotient(m));

    ScalarField r(mesh, F.values() - g_data.values());
    const double res_abs = interior_l2_norm(r);
    const double res_rel = res_abs / g_norm;
    residuals.push_back(res_rel);

    const double err = truth ? relative_interior_error(sigma, *truth)
                             : std::numeric_limits<double>::quiet_NaN();
    log.records.push_back({k, err, res_rel, err / prev_err, elapsed_s(t0)});
    prev_err = err;

    if (res_rel < cfg.residual_tol) {
      log.stop_reason = "residual_tol";
      break;
    }
    if (cfg.noise_delta > 0 && res_abs <= cfg.morozov_factor * cfg.noise_delta * g_norm) {
      log.stop_reason = "discrepancy";
      break;
    }
    if (k >= 3 && res_rel > cfg.stall_ratio * residuals[residuals.size() - 2]) {
      log.stop_reason = "stalled";
      break;
    }
    check_divergence(residuals, k);
    if (k == cfg.max_iterations) {
      log.stop_reason = "max_iterations";
      break;
    }

    TransportProblem tp;
    tp.mesh = &mesh;
    tp.velocity = vel;
    tp.source = g_data;
    tp.inflow_data = S.sigma0;
    tp.eps = cfg.eps;
    tp.c_eps = cfg.c_eps;
    tp.tau_scale = cfg.tau_scale;
    if (log.eps_used == 0) log.eps_used = resolve_eps(tp);
    ScalarField half;
    try {
      half = solve_transport(tp);
    } catch (const DegenerateTransportError& e) {
      throw DegenerateTransportError(std::string(e.what()) + " (iteration " +
                                     std::to_string(k) + ")");
    }
    sigma = S.project(half);
    if (!S.check(sigma).gradient_ok)
      log.warnings.push_back("iteration " + std::to_string(k + 1) +
                             ": |grad sigma| exceeds K (not projected)");
  }
  if (log.stop_reason.empty()) log.stop_reason = "max_iterations";

  out.sigma = sigma;
  out.log = std::move(log);
  return out;
}

ReconstructionResult landweber_run(const ForwardProblem& fp, const ScalarField& g_data,
                                   const AdmissibleSet& S, const ReconstructionConfig& cfg,
                                   const ScalarField* truth) {
  const Mesh& mesh = *fp.mesh;
  if (!g_data.same_mesh(S.sigma0)) throw InputError("landweber_run: mesh mismatch");

  ForwardProblem fpi = fp;
  fpi.solver_tol = cfg.solver_tol;

  const double g_norm = interior_l2_norm(g_data);
  if (g_norm == 0) throw InputError("landweber_run: zero data field");

  ScalarField sigma = cfg.initial ? *cfg.initial : S.sigma0;

  auto zero_boundary = [&mesh](Eigen::VectorXd& v) {
    for (int i = 0; i < mesh.vertex_count(); ++i)
      if (mesh.vertex_on_boundary[i]) v[i] = 0;
  };

  IterationLog log;
  double mu = cfg.mu;
  if (mu <= 0) {
    // Power iteration on DF* DF restricted to interior increments.
    LinearizedState st(fpi, S.project(sigma), cfg.solver_tol);
    Rng rng(cfg.seed);
    Eigen::VectorXd h(mesh.vertex_count());
    for (int i = 0; i < mesh.vertex_count(); ++i) h[i] = rng.next_symmetric();
    zero_boundary(h);
    ScalarField hf(mesh, h);
    double norm = l2_norm(hf);
    hf = ScalarField(mesh, hf.values() / norm);
    double lambda_hat = 0;
    for (int it = 0; it < cfg.power_iterations; ++it) {
      ScalarField z = st.apply_adjoint(st.apply(hf));
      Eigen::VectorXd zv = z.values();
      zero_boundary(zv);
      ScalarField zf(mesh, std::move(zv));
      lambda_hat = l2_inner(hf, zf);
      const double zn = l2_norm(zf);
      if (zn == 0) break;
      hf = ScalarField(mesh, zf.values() / zn);
    }
    if (!(lambda_hat > 0)) throw SolverError("landweber: power method failed");
    mu = cfg.mu_boost / lambda_hat;
  }
  log.mu_used = mu;

  std::vector<double> residuals;
  Eigen::VectorXd warm_u, warm_phi;
  double prev_err = std::numeric_limits<double>::quiet_NaN();
  const auto t0 = std::chrono::steady_clock::now();

  ScalarField projected = S.project(sigma);
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    projected = S.project(sigma);
    LinearizedState st(fpi, projected, cfg.solver_tol, &warm_u);
    ScalarField F = st.internal_data();
    ScalarField r(mesh, F.values() - g_data.values());
    const double res_abs = interior_l2_norm(r);
    const double res_rel = res_abs / g_norm;
    residuals.push_back(res_rel);

    const double err = truth ? relative_interior_error(projected, *truth)
                             : std::numeric_limits<double>::quiet_NaN();
    log.records.push_back({k, err, res_rel, err / prev_err, elapsed_s(t0)});
    prev_err = err;

    if (res_rel < cfg.residual_tol) {
      log.stop_reason = "residual_tol";
      break;
    }
    if (cfg.noise_delta > 0 && res_abs <= cfg.morozov_factor * cfg.noise_delta * g_norm) {
      log.stop_reason = "discrepancy";
      break;
    }
    check_divergence(residuals, k);
    if (k == cfg.max_iterations) {
      log.stop_reason = "max_iterations";
      break;
    }

    ScalarField d = st.apply_adjoint(r, &warm_phi);
    sigma = ScalarField(mesh, projected.values() - mu * d.values());
  }
  if (log.stop_reason.empty()) log.stop_reason = "max_iterations";

  return ReconstructionResult{S.project(sigma), std::move(log)};
}

ReconstructionResult reconstruct(const ForwardProblem& fp, const ScalarField& g_data,
                                 const AdmissibleSet& S, const ReconstructionConfig& cfg,
                                 const ScalarField* truth) {
  return cfg.algorithm == Algorithm::Landweber ? landweber_run(fp, g_data, S, cfg, truth)
                                               : quasi_newton_run(fp, g_data, S, cfg, truth);
}

}  // namespace matmi
