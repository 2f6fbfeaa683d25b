#include "matmi/verify.hpp"

#include <cmath>
#include <cstdio>

#include "matmi/derivative.hpp"
#include "matmi/errors.hpp"
#include "matmi/experiments.hpp"
#include "matmi/forward.hpp"
#include "matmi/reconstruct.hpp"
#include "matmi/transport.hpp"

namespace matmi::verify {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

ForwardProblem make_fp(const Mesh& mesh, const TensorField& D, double tol = 1e-10) {
  return ForwardProblem{&mesh, &D, Gauge{}, tol, CoefficientBounds{0.01, 2.0, 0.3}};
}

// Manufactured transport case: v = (x - c)/2, sigma = 0.3 + 0.1 sin(pi x) sin(pi y).
double manufactured_transport_error(int n) {
  Mesh mesh = build_unit_square_mesh(n);
  const Vec2 c(0.5, 0.5);
  AdvectionField v = AdvectionField::analytic(
      mesh, [c](const Vec2& x) { return Vec2(0.5 * (x - c)); },
      [](const Vec2&) { return 1.0; });
  auto sigma_fn = [](const Vec2& x) {
    return 0.3 + 0.1 * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
  };
  ScalarField sigma_true = ScalarField::from_function(mesh, sigma_fn);
  ScalarField g = ScalarField::from_function(mesh, [&](const Vec2& x) {
    const double sx = std::sin(M_PI * x.x()), sy = std::sin(M_PI * x.y());
    const double cx = std::cos(M_PI * x.x()), cy = std::cos(M_PI * x.y());
    const double vgrad =
        0.05 * M_PI * ((x.x() - 0.5) * cx * sy + (x.y() - 0.5) * sx * cy);
    return vgrad + sigma_fn(x);
  });

  TransportProblem tp;
  tp.mesh = &mesh;
  tp.velocity = v;
  tp.source = g;
  tp.inflow_data = sigma_true;
  ScalarField rec = solve_transport(tp);
  return relative_interior_error(rec, sigma_true);
}

}  // namespace

ScalarField random_smooth_bump_field(const Mesh& mesh, Rng& rng) {
  struct Wave {
    Vec2 k;
    double phase, amp;
  };
  std::vector<Wave> waves(5);
  for (auto& w : waves) {
    w.k = Vec2(rng.next_symmetric(), rng.next_symmetric()) * 5.0 * M_PI;
    w.phase = rng.next_double() * 2.0 * M_PI;
    w.amp = rng.next_symmetric();
  }
  ScalarField f = ScalarField::from_function(mesh, [&](const Vec2& x) {
    double raw = 0;
    for (const auto& w : waves) raw += w.amp * std::sin(w.k.dot(x) + w.phase);
    const double env = 16.0 * x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y());
    return raw * env;
  });
  const double norm = l2_norm(f);
  return ScalarField(mesh, f.values() / (norm > 0 ? norm : 1.0));
}

CheckResult check_maxwell_identities(int n) {
  Mesh mesh = build_unit_square_mesh(n);
  TensorField D = paper_tensor(mesh);
  ForwardProblem fp = make_fp(mesh, D);
  ScalarField sigma = paper_sigma(mesh);
  VectorField E = compute_E(fp, sigma);

  double dev = 0;
  Eigen::VectorXd curl = curl_per_element(E);
  for (int e = 0; e < mesh.triangle_count(); ++e)
    dev = std::max(dev, std::abs(curl[e] - 1.0));

  Gauge gauge;
  VectorField radial = VectorField::from_function(
      mesh, [&gauge](const Vec2& x) { return gauge.e_tilde_cross_b0(x); });
  ScalarField div = weak_divergence(radial);
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (!mesh.vertex_on_boundary[i]) dev = std::max(dev, std::abs(div[i] - 1.0));

  return {"maxwell_identities_n" + std::to_string(n), dev <= 1e-12, dev,
          "max deviation of curl(E) and interior div(Etilde x B0) from 1"};
}

CheckResult check_adjoint_identity(int n, int trials, std::uint64_t seed) {
  Mesh mesh = build_unit_square_mesh(n);
  TensorField D = paper_tensor(mesh);
  ForwardProblem fp = make_fp(mesh, D);
  LinearizedState st(fp, paper_sigma(mesh), 1e-10);
  Rng rng(seed);
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    ScalarField h = random_smooth_bump_field(mesh, rng);
    ScalarField g = random_smooth_bump_field(mesh, rng);
    const double lhs = l2_inner(st.apply(h), g);
    const double rhs = l2_inner(h, st.apply_adjoint(g));
    worst = std::max(worst, std::abs(lhs - rhs) / (l2_norm(h) * l2_norm(g)));
  }
  const double tol = std::max(1e-6, 5.0 * mesh.cell_size);
  return {"adjoint_identity_n" + std::to_string(n), worst <= tol, worst,
          "max relative mismatch over " + std::to_string(trials) + " pairs (tol " + fmt(tol) +
              ")"};
}

CheckResult check_taylor_remainder(int n) {
  Mesh mesh = build_unit_square_mesh(n);
  TensorField D = paper_tensor(mesh);
  ForwardProblem fp = make_fp(mesh, D);
  ScalarField sigma = paper_sigma(mesh);
  Rng rng(11);
  ScalarField h = random_smooth_bump_field(mesh, rng);
  // keep sigma + t h admissible for every t used
  h = ScalarField(mesh, 0.5 * h.values());

  LinearizedState st(fp, sigma, 1e-10);
  ScalarField F0 = st.internal_data();
  ScalarField dF = st.apply(h);

  const double ts[4] = {1e-1, 3e-2, 1e-2, 3e-3};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double t : ts) {
    ScalarField pert(mesh, sigma.values() + t * h.values());
    ScalarField Ft = internal_data(fp, pert);
    ScalarField rem(mesh, Ft.values() - F0.values() - t * dF.values());
    const double r = l2_norm(rem);
    const double lx = std::log(t), ly = std::log(r);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
  return {"taylor_remainder_n" + std::to_string(n), slope >= 1.8 && slope <= 2.2, slope,
          "log-log slope of the linearization remainder"};
}

CheckResult check_disk_oracle(int level) {
  Mesh mesh = build_disk_mesh(Vec2(0, 0), 1.0, level);
  TensorField D = TensorField::identity(mesh);
  ForwardProblem fp{&mesh, &D, Gauge{Vec2(0, 0)}, 1e-12, CoefficientBounds{}};
  ScalarField sigma = ScalarField::constant(mesh, 0.4);

  VectorField E = compute_E(fp, sigma);
  double dev_e = 0;
  for (int e = 0; e < mesh.triangle_count(); ++e)
    dev_e = std::max(dev_e, E.element_values().row(e).norm());  // grad u part

  ScalarField F = internal_data(fp, sigma);
  double dev_f = 0;
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (!mesh.vertex_on_boundary[i]) dev_f = std::max(dev_f, std::abs(F[i] - 0.4));

  const double tol = std::max(1e-8, 0.5 * mesh.cell_size);
  const double dev = std::max(dev_e, dev_f);
  return {"disk_oracle_level" + std::to_string(level), dev <= tol, dev,
          "max |E - Etilde| and interior |F - sigma| (tol " + fmt(tol) + ")"};
}

CheckResult check_disk_oracle_convergence(int level) {
  auto f_error = [](int lvl) {
    Mesh mesh = build_disk_mesh(Vec2(0, 0), 1.0, lvl);
    TensorField D = TensorField::identity(mesh);
    ForwardProblem fp{&mesh, &D, Gauge{Vec2(0.3, -0.2)}, 1e-12, CoefficientBounds{}};
    ScalarField sigma = ScalarField::constant(mesh, 0.4);
    ScalarField F = internal_data(fp, sigma);
    ScalarField ref = ScalarField::constant(mesh, 0.4);
    return relative_interior_error(F, ref);
  };
  const double coarse = f_error(level);
  const double fine = f_error(level + 1);
  const bool at_floor = coarse < 1e-12 && fine < 1e-12;
  const double factor = at_floor ? std::numeric_limits<double>::infinity() : coarse / fine;
  return {"disk_oracle_convergence_level" + std::to_string(level),
          at_floor || factor >= 1.7, factor,
          "F-error reduction under refinement, off-center gauge (" + fmt(coarse) + " -> " +
              fmt(fine) + ")"};
}

CheckResult check_transport_oracle(int n, double tol) {
  const double err = manufactured_transport_error(n);
  return {"transport_oracle_n" + std::to_string(n), err < tol, err,
          "manufactured-solution relative L2 error (tol " + fmt(tol) + ")"};
}

CheckResult check_transport_convergence(int n) {
  const double coarse = manufactured_transport_error(n);
  const double fine = manufactured_transport_error(2 * n);
  const double factor = coarse / fine;
  return {"transport_convergence_n" + std::to_string(n), factor >= 1.7, factor,
          "error reduction from n=" + std::to_string(n) + " to n=" + std::to_string(2 * n) +
              " (" + fmt(coarse) + " -> " + fmt(fine) + ")"};
}

CheckResult check_stability_sweep(int n, int pairs, std::uint64_t seed_a, std::uint64_t seed_b,
                                  double* fitted_c) {
  Mesh mesh = build_unit_square_mesh(n);
  TensorField D = paper_tensor(mesh);
  ForwardProblem fp = make_fp(mesh, D, 1e-10);
  ScalarField sigma0 = ScalarField::constant(mesh, 0.2);

  auto admissible = [&](Rng& rng) {
    ScalarField bump = random_smooth_bump_field(mesh, rng);
    const double maxabs = bump.values().cwiseAbs().maxCoeff();
    return ScalarField(mesh, sigma0.values() + (0.08 / maxabs) * bump.values());
  };
  auto fitted = [&](std::uint64_t seed) {
    Rng rng(seed);
    double c = std::numeric_limits<double>::infinity();
    for (int p = 0; p < pairs; ++p) {
      ScalarField s1 = admissible(rng);
      ScalarField s2 = admissible(rng);
      ScalarField F1 = internal_data(fp, s1);
      ScalarField F2 = internal_data(fp, s2);
      ScalarField dF(mesh, F1.values() - F2.values());
      ScalarField ds(mesh, s1.values() - s2.values());
      c = std::min(c, interior_l2_norm(dF) / interior_l2_norm(ds));
    }
    return c;
  };
  const double ca = fitted(seed_a);
  const double cb = fitted(seed_b);
  const double spread = std::abs(ca - cb) / std::max(ca, cb);
  if (fitted_c) *fitted_c = std::min(ca, cb);
  return {"stability_constant_n" + std::to_string(n), ca > 0 && cb > 0 && spread <= 0.20,
          std::min(ca, cb),
          "fitted c over " + std::to_string(pairs) + " pairs x 2 seeds; spread " + fmt(spread)};
}

CheckResult check_quasi_newton_coarse(int n, double tol) {
  Mesh mesh = build_unit_square_mesh(n);
  Phantom p = make_phantom("paper-phantom", mesh);
  ForwardProblem fp{&mesh, &p.D, Gauge{}, 1e-10,
                    CoefficientBounds{p.S.c1, p.S.c2, p.S.lambda}};
  ScalarField g = internal_data(fp, p.sigma_true);
  ReconstructionConfig cfg;
  cfg.stall_ratio = 0.9;
  auto res = quasi_newton_run(fp, g, p.S, cfg, &p.sigma_true);
  const double err = res.log.records.back().error;
  bool ratios_ok = true;
  for (const auto& r : res.log.records)
    if (r.k >= 2 && !(r.ratio < 1.0)) ratios_ok = false;
  return {"quasi_newton_n" + std::to_string(n), err < tol && ratios_ok, err,
          "final relative error (tol " + fmt(tol) + "), contraction ratios " +
              (ratios_ok ? "< 1" : ">= 1 somewhere")};
}

bool Report::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

Report run(const std::string& level) {
  Report rep;
  rep.rows.push_back(check_maxwell_identities(16));
  rep.rows.push_back(check_adjoint_identity(16, 50, 21));
  rep.rows.push_back(check_taylor_remainder(16));
  rep.rows.push_back(check_disk_oracle(3));
  rep.rows.push_back(check_transport_oracle(32, 5e-2));
  rep.rows.push_back(check_stability_sweep(16, 40, 31, 32));
  if (level == "full") {
    rep.rows.push_back(check_adjoint_identity(32, 50, 23));
    rep.rows.push_back(check_taylor_remainder(32));
    rep.rows.push_back(check_disk_oracle(4));
    rep.rows.push_back(check_disk_oracle_convergence(3));
    rep.rows.push_back(check_transport_oracle(64, 5e-2));
    rep.rows.push_back(check_transport_convergence(64));
    rep.rows.push_back(check_stability_sweep(32, 50, 31, 32));
    rep.rows.push_back(check_quasi_newton_coarse(64, 1e-2));
  } else if (level != "quick") {
    throw InputError("verify: level must be 'quick' or 'full'");
  }
  return rep;
}

}  // namespace matmi::verify
