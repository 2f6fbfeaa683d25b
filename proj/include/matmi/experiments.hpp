#ifndef MATMI_EXPERIMENTS_HPP
#define MATMI_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "matmi/reconstruct.hpp"

namespace matmi {

// Radial cross-property phantom on the unit square: 0.6 inside r <= 0.12,
// quintic smoothstep blend down to 0.2 across 0.12 < r < 0.46, 0.2 outside,
// with r measured from (0.5, 0.5). The blend parameter is s = (0.46-r)/0.34
// so the profile is continuous at both radii.
double paper_sigma_value(const Vec2& x);
ScalarField paper_sigma(const Mesh& mesh);

// Diffusion tensor: identity plus three compactly supported bumps,
//   d11 = 1 - 0.3 phi1, d22 = 1 - 0.3 phi2, d12 = 0.2 phi3.
// Bump geometry keeps nodal eigenvalues inside [0.4, 1]; any node failing
// the check is pulled toward I and counted in `clip_warnings`.
TensorField paper_tensor(const Mesh& mesh, int* clip_warnings = nullptr);

// g_delta = g + delta |g| w / |w| with w uniform in [-1,1] per node.
ScalarField add_noise(const ScalarField& g, double delta, std::uint64_t seed);

// |sigma - sigma_true| / |sigma_true| over interior nodes.
double relative_l2_error(const ScalarField& sigma, const ScalarField& sigma_true);

struct Phantom {
  std::string name;
  ScalarField sigma_true;
  TensorField D;
  AdmissibleSet S;
};

// Registry: "paper-phantom" (anisotropic D), "paper-phantom-iso" (D = I),
// "mild" (low-contrast smooth factor, D = I).
Phantom make_phantom(const std::string& name, const Mesh& mesh);
std::vector<std::string> phantom_names();

}  // namespace matmi

#endif
