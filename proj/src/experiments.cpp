#include "matmi/experiments.hpp"

#include <cmath>

#include "matmi/errors.hpp"
#include "matmi/rng.hpp"

namespace matmi {

double paper_sigma_value(const Vec2& x) {
  const double r = std::hypot(x.x() - 0.5, x.y() - 0.5);
  if (r <= 0.12) return 0.6;
  if (r >= 0.46) return 0.2;
  const double s = (0.46 - r) / 0.34;
  return 0.4 * s * s * s * (6.0 * s * s - 15.0 * s + 10.0) + 0.2;
}

ScalarField paper_sigma(const Mesh& mesh) {
  return ScalarField::from_function(mesh, paper_sigma_value);
}

namespace {

// Gaussian profile cut at three standard radii and renormalized to peak 1.
double bump(const Vec2& x, const Vec2& c, double s) {
  const double r2 = (x - c).squaredNorm();
  if (r2 >= 9.0 * s * s) return 0.0;
  const double cut = std::exp(-4.5);
  return (std::exp(-0.5 * r2 / (s * s)) - cut) / (1.0 - cut);
}

const Vec2 kBumpCenter1(0.47, 0.50);
const Vec2 kBumpCenter2(0.53, 0.50);
const Vec2 kBumpCenter3(0.50, 0.46);
const double kBumpWidth12 = 0.13;
const double kBumpWidth3 = 0.045;

}  // namespace

TensorField paper_tensor(const Mesh& mesh, int* clip_warnings) {
  const int n = mesh.vertex_count();
  Eigen::VectorXd d11(n), d12(n), d22(n);
  int clipped = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2& x = mesh.vertices[i];
    double a = 1.0 - 0.3 * bump(x, kBumpCenter1, kBumpWidth12);
    double c = 1.0 - 0.3 * bump(x, kBumpCenter2, kBumpWidth12);
    double b = 0.2 * bump(x, kBumpCenter3, kBumpWidth3);

    // Pull the perturbation toward I until eigenvalues land in [0.4, 1].
    double t = 1.0;
    for (int guard = 0; guard < 60; ++guard) {
      const double a11 = 1.0 + t * (a - 1.0), a22 = 1.0 + t * (c - 1.0), a12 = t * b;
      const double mean = 0.5 * (a11 + a22);
      const double rad = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
      if (mean + rad <= 1.0 + 1e-12 && mean - rad >= 0.4 - 1e-12) break;
      t *= 0.5;
    }
    if (t < 1.0) ++clipped;
    d11[i] = 1.0 + t * (a - 1.0);
    d22[i] = 1.0 + t * (c - 1.0);
    d12[i] = t * b;
  }
  if (clip_warnings) *clip_warnings = clipped;
  return TensorField(mesh, std::move(d11), std::move(d12), std::move(d22));
}

ScalarField add_noise(const ScalarField& g, double delta, std::uint64_t seed) {
  if (delta < 0) throw InputError("add_noise: delta must be >= 0");
  if (delta == 0) return g;
  const Mesh& mesh = g.mesh();
  Rng rng(seed);
  Eigen::VectorXd w(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) w[i] = rng.next_symmetric();
  ScalarField wf(mesh, std::move(w));
  const double scale = delta * l2_norm(g) / l2_norm(wf);
  return ScalarField(mesh, g.values() + scale * wf.values());
}

double relative_l2_error(const ScalarField& sigma, const ScalarField& sigma_true) {
  return relative_interior_error(sigma, sigma_true);
}

std::vector<std::string> phantom_names() {
  return {"paper-phantom", "paper-phantom-iso", "mild"};
}

Phantom make_phantom(const std::string& name, const Mesh& mesh) {
  Phantom p;
  p.name = name;
  AdmissibleSet S;
  S.sigma0 = ScalarField::constant(mesh, 0.2);
  S.c1 = 0.1;
  S.c2 = 1.0;
  S.c3 = 1.0;
  S.K = 20.0;
  S.L = 50.0;
  S.lambda = 0.4;
  S.eta = 0.5;

  if (name == "paper-phantom") {
    p.sigma_true = paper_sigma(mesh);
    p.D = paper_tensor(mesh);
  } else if (name == "paper-phantom-iso") {
    p.sigma_true = paper_sigma(mesh);
    p.D = TensorField::identity(mesh);
  } else if (name == "mild") {
    p.sigma_true = ScalarField::from_function(mesh, [](const Vec2& x) {
      return 0.2 + 0.05 * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
    });
    p.D = TensorField::identity(mesh);
  } else {
    throw InputError("unknown phantom: " + name);
  }
  p.S = std::move(S);
  return p;
}

}  // namespace matmi
