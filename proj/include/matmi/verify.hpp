#ifndef MATMI_VERIFY_HPP
#define MATMI_VERIFY_HPP

#include <string>
#include <vector>

#include "matmi/fields.hpp"
#include "matmi/rng.hpp"

namespace matmi::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0;
  std::string detail;
};

// Smooth random field vanishing on the boundary: a short random trigonometric
// series under the polynomial envelope 16 x(1-x) y(1-y), normalized to unit
// L2 norm. Unit-square meshes only.
ScalarField random_smooth_bump_field(const Mesh& mesh, Rng& rng);

// Per-element curl of the computed E equals 1 and the interior weak
// divergence of Etilde x B0 equals 1, both to 1e-12.
CheckResult check_maxwell_identities(int n);

// max over random boundary-vanishing (h, g) of
// |<DF h, g> - <h, DF* g>| / (|h| |g|) against max(1e-6, 5 h_mesh).
CheckResult check_adjoint_identity(int n, int trials, std::uint64_t seed);

// log-log slope of |F(sigma + t h) - F(sigma) - t DF h| over
// t in {1e-1, 3e-2, 1e-2, 3e-3}; passes in [1.8, 2.2].
CheckResult check_taylor_remainder(int n);

// Gauge-centered disk, constant sigma, D = I: E == Etilde and F == sigma at
// interior nodes within max(1e-8, C h) with C = 0.5.
CheckResult check_disk_oracle(int level);

// Same data error with the gauge center moved off the disk center (the
// elliptic solve is then nontrivial); one refinement must shrink the F error
// by >= 1.7x unless both errors sit at machine level.
CheckResult check_disk_oracle_convergence(int level);

// Manufactured transport solution with analytic source; relative L2 error
// against the given tolerance.
CheckResult check_transport_oracle(int n, double tol);

// err(n) / err(2n) >= 1.7 for the manufactured transport solution.
CheckResult check_transport_convergence(int n);

// Fitted lower stability constant min |F(s1)-F(s2)| / |s1-s2| over random
// admissible pairs; positive and seed-stable within 20%. `fitted_c` receives
// the smaller of the two seeds' constants.
CheckResult check_stability_sweep(int n, int pairs, std::uint64_t seed_a, std::uint64_t seed_b,
                                  double* fitted_c = nullptr);

// Coarse quasi-Newton run on the reference phantom: final relative error
// below `tol` and contraction ratios below 1 from the second iteration on.
CheckResult check_quasi_newton_coarse(int n, double tol);

struct Report {
  std::vector<CheckResult> rows;
  bool all_pass() const;
};

// level: "quick" (small meshes, seconds) or "full" (adds n = 64+ rate checks).
Report run(const std::string& level);

}  // namespace matmi::verify

#endif
