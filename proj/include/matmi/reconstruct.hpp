#ifndef MATMI_RECONSTRUCT_HPP
#define MATMI_RECONSTRUCT_HPP

#include <optional>
#include <string>
#include <vector>

#include "matmi/derivative.hpp"
#include "matmi/forward.hpp"
#include "matmi/transport.hpp"

namespace matmi {

// Convex constraint set: pointwise bounds around a known background sigma0
// (which also supplies the boundary values), an L2 ball of radius c3 for the
// increment, and verified-only gradient bounds K and L.
struct AdmissibleSet {
  ScalarField sigma0;
  double c1 = 0.1;
  double c2 = 1.0;
  double c3 = 1.0;
  double K = 20.0;   // sup-norm bound on grad sigma (checked, not projected)
  double L = 50.0;   // |grad alpha| <= L |alpha| (checked, not projected)
  double lambda = 0.4;
  double eta = 0.5;

  // Approximate Hilbert projection: boundary nodes to sigma0, interior clamp
  // to [c1, c2], then radial rescale of the increment into the c3 ball.
  ScalarField project(const ScalarField& sigma) const;

  struct Membership {
    bool bounds_ok = true;
    bool boundary_ok = true;
    bool ball_ok = true;
    bool gradient_ok = true;  // |grad sigma| <= K
    bool ratio_ok = true;     // |grad alpha| <= L |alpha|
    bool core() const { return bounds_ok && boundary_ok && ball_ok; }
    bool all() const { return core() && gradient_ok && ratio_ok; }
  };
  Membership check(const ScalarField& sigma, double tol = 1e-12) const;
  bool contains(const ScalarField& sigma, double tol = 1e-12) const {
    return check(sigma, tol).core();
  }
};

enum class Algorithm { Landweber, QuasiNewton };

struct ReconstructionConfig {
  Algorithm algorithm = Algorithm::QuasiNewton;
  double mu = 0;        // Landweber step; 0 selects mu_boost / power-method estimate
  double mu_boost = 1;  // multiplier on the automatic step (stable below ~2)
  int max_iterations = 50;
  double residual_tol = 1e-6;   // relative residual stop (noise-free)
  double noise_delta = 0;       // > 0 enables the discrepancy stop
  double morozov_factor = 1.1;
  double stall_ratio = 0.98;    // stop once residual reduction is slower than this
  double eps = -1;              // transport diffusion (auto when negative)
  double c_eps = 0.5;
  double tau_scale = 1.0;
  double solver_tol = 1e-8;
  std::uint64_t seed = 1;
  int power_iterations = 20;
  std::optional<ScalarField> initial;  // defaults to sigma0
};

struct IterationRecord {
  int k = 0;
  double error = 0;     // relative L2 error vs truth (interior); NaN if unknown
  double residual = 0;  // relative L2 data residual (interior)
  double ratio = 0;     // error_k / error_{k-1}; NaN when undefined
  double wall_time_s = 0;
};

struct IterationLog {
  std::vector<IterationRecord> records;
  double mu_used = 0;
  double eps_used = 0;
  std::string stop_reason;
  std::vector<std::string> warnings;
};

struct ReconstructionResult {
  ScalarField sigma;
  IterationLog log;
};

// Projected Landweber iteration
//   sigma_{n+1} = T[sigma_n] - mu DF*[T[sigma_n]] (F(T[sigma_n]) - g).
ReconstructionResult landweber_run(const ForwardProblem& fp, const ScalarField& g_data,
                                   const AdmissibleSet& S, const ReconstructionConfig& cfg,
                                   const ScalarField* truth = nullptr);

// Quasi-Newton loop: recompute E for the current iterate, solve the
// stationary transport equation grad.(sigma D E x B0) = g with sigma0 as
// boundary data, project.
ReconstructionResult quasi_newton_run(const ForwardProblem& fp, const ScalarField& g_data,
                                      const AdmissibleSet& S, const ReconstructionConfig& cfg,
                                      const ScalarField* truth = nullptr);

ReconstructionResult reconstruct(const ForwardProblem& fp, const ScalarField& g_data,
                                 const AdmissibleSet& S, const ReconstructionConfig& cfg,
                                 const ScalarField* truth = nullptr);

}  // namespace matmi

#endif
