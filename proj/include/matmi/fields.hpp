#ifndef MATMI_FIELDS_HPP
#define MATMI_FIELDS_HPP

#include <functional>
#include <memory>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "matmi/mesh.hpp"

namespace matmi {

// Rotations used to spell out the cross products with B0 = B1 = (0,0,1):
//   a x B0 = (a2, -a1)   and   B0 x a = (-a2, a1).
inline Vec2 cross_with_b0(const Vec2& a) { return Vec2(a.y(), -a.x()); }
inline Vec2 b0_cross(const Vec2& a) { return Vec2(-a.y(), a.x()); }

// P1 nodal scalar field.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const Mesh& mesh, Eigen::VectorXd values);
  static ScalarField zero(const Mesh& mesh);
  static ScalarField constant(const Mesh& mesh, double value);
  static ScalarField from_function(const Mesh& mesh,
                                   const std::function<double(const Vec2&)>& f);

  const Mesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  // Value of the linear interpolant at a quadrature point of an element.
  double at_quad(int elem, int q) const;
  double at_bary(int elem, const double bary[3]) const;
  double at_point(int elem, const Vec2& x) const;

  bool same_mesh(const ScalarField& other) const { return mesh_ == other.mesh_; }
  bool all_finite() const { return values_.allFinite(); }

 private:
  const Mesh* mesh_ = nullptr;
  Eigen::VectorXd values_;
};

// 2D vector field. Three storage layouts:
//   Element       - one constant vector per triangle (P0),
//   Nodal         - one vector per vertex, interpolated linearly (P1),
//   NodalPlusElement - sum of the two; used for E = interp(Etilde) + grad(u)
//                   so the affine part keeps its exact in-element variation.
enum class VectorRep { Element, Nodal, NodalPlusElement };

class VectorField {
 public:
  VectorField() = default;
  static VectorField element(const Mesh& mesh, Eigen::Matrix<double, Eigen::Dynamic, 2> per_elem);
  static VectorField nodal(const Mesh& mesh, Eigen::Matrix<double, Eigen::Dynamic, 2> per_node);
  static VectorField nodal_plus_element(const Mesh& mesh,
                                        Eigen::Matrix<double, Eigen::Dynamic, 2> per_node,
                                        Eigen::Matrix<double, Eigen::Dynamic, 2> per_elem);
  static VectorField from_function(const Mesh& mesh,
                                   const std::function<Vec2(const Vec2&)>& f);  // Nodal

  const Mesh& mesh() const { return *mesh_; }
  VectorRep rep() const { return rep_; }
  const Eigen::Matrix<double, Eigen::Dynamic, 2>& nodal_values() const { return nodal_; }
  const Eigen::Matrix<double, Eigen::Dynamic, 2>& element_values() const { return elem_; }

  // Evaluation inside element `elem` at barycentric coordinates `bary`.
  Vec2 at_bary(int elem, const double bary[3]) const;
  Vec2 at_quad(int elem, int q) const;
  Vec2 at_centroid(int elem) const;
  Vec2 at_point(int elem, const Vec2& x) const;

  // Gradient (2x2 Jacobian d v_i / d x_j) of the field restricted to an
  // element; constant per element for every representation.
  Eigen::Matrix2d jacobian(int elem) const;
  double divergence(int elem) const;
  double curl(int elem) const;  // dv2/dx1 - dv1/dx2

  bool all_finite() const { return nodal_.allFinite() && elem_.allFinite(); }

 private:
  const Mesh* mesh_ = nullptr;
  VectorRep rep_ = VectorRep::Element;
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodal_;  // vertex_count x 2 (if used)
  Eigen::Matrix<double, Eigen::Dynamic, 2> elem_;   // triangle_count x 2 (if used)
};

// Symmetric 2x2 tensor field with nodal coefficients d11, d12, d22.
// The out-of-plane entry d33 = 1 is implicit throughout.
class TensorField {
 public:
  TensorField() = default;
  TensorField(const Mesh& mesh, Eigen::VectorXd d11, Eigen::VectorXd d12, Eigen::VectorXd d22);
  static TensorField identity(const Mesh& mesh);
  static TensorField from_functions(const Mesh& mesh,
                                    const std::function<double(const Vec2&)>& f11,
                                    const std::function<double(const Vec2&)>& f12,
                                    const std::function<double(const Vec2&)>& f22);

  const Mesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& d11() const { return d11_; }
  const Eigen::VectorXd& d12() const { return d12_; }
  const Eigen::VectorXd& d22() const { return d22_; }

  Eigen::Matrix2d at_node(int i) const;
  Eigen::Matrix2d at_bary(int elem, const double bary[3]) const;
  Eigen::Matrix2d at_quad(int elem, int q) const;
  Eigen::Matrix2d at_point(int elem, const Vec2& x) const;

  void eigenvalues_at_node(int i, double& lo, double& hi) const;
  // min/max eigenvalue over all nodes, and max spectral distance to I.
  void eigen_range(double& lo, double& hi, double& dist_to_identity) const;

 private:
  const Mesh* mesh_ = nullptr;
  Eigen::VectorXd d11_, d12_, d22_;
};

// Rotational gauge field Etilde(x) = 0.5 * (-(x2-c2), x1-c1); curl == 1.
struct Gauge {
  Vec2 center{0.5, 0.5};
  Vec2 e_tilde(const Vec2& x) const {
    return 0.5 * Vec2(-(x.y() - center.y()), x.x() - center.x());
  }
  // Etilde x B0 = 0.5 * (x - c): the radial half-field.
  Vec2 e_tilde_cross_b0(const Vec2& x) const { return 0.5 * (x - center); }
};

// ---- discrete vector calculus ----

// Per-triangle constant gradient of the linear interpolant (P0 field).
VectorField p1_gradient(const ScalarField& f);

// Lumped P1 mass vector m_i = integral of phi_i.
Eigen::VectorXd lumped_mass(const Mesh& mesh);

// Exact P1 mass-matrix pairing (no matrix is formed).
double l2_inner(const ScalarField& f, const ScalarField& g);
double l2_norm(const ScalarField& f);
// Same pairing with boundary nodal values zeroed out first.
double interior_l2_norm(const ScalarField& f);

// |a - b| / |b| in the interior-masked L2 norm (boundary nodes zeroed in
// both numerator and denominator).
double relative_interior_error(const ScalarField& a, const ScalarField& b);

// Nodal weak divergence: d_i = (-(w, grad phi_i) + (w.nu, phi_i)_boundary) / m_i.
// Exact at interior nodes for affine w.
ScalarField weak_divergence(const VectorField& w);

// Same, for an arbitrary per-element integrand evaluated at quadrature points.
ScalarField weak_divergence_of(const Mesh& mesh,
                               const std::function<Vec2(int elem, const Vec2&)>& w);

// Per-element scalar curl of a vector field.
Eigen::VectorXd curl_per_element(const VectorField& v);

// Transport velocity v together with its in-element divergence. Wraps either
// v = (D E) x B0 built from a tensor and an electric field, a plain
// VectorField, or an analytic pair of callbacks.
class AdvectionField {
 public:
  static AdvectionField from_tensor_and_field(const TensorField& D, VectorField E);
  static AdvectionField from_vector_field(VectorField v);
  static AdvectionField analytic(const Mesh& mesh,
                                 std::function<Vec2(const Vec2&)> value,
                                 std::function<double(const Vec2&)> divergence);

  const Mesh& mesh() const { return *mesh_; }
  Vec2 value(int elem, const Vec2& x) const;
  double divergence(int elem, const Vec2& x) const;
  double max_speed() const;  // max |v| over all element quadrature points

 private:
  const Mesh* mesh_ = nullptr;
  const TensorField* tensor_ = nullptr;  // borrowed; kept alive by caller
  VectorField field_;
  bool cross_b0_ = false;  // apply (.) x B0 to tensor*field
  std::function<Vec2(const Vec2&)> fn_value_;
  std::function<double(const Vec2&)> fn_div_;
  mutable double max_speed_ = -1;
};

// Matrix of the conservative advection form: row i, column j holds
//   -(phi_j v, grad phi_i) + (phi_j v.nu, phi_i)_boundary,
// so (A sigma)_i is the dual weak divergence of (sigma v) and
// weak_divergence == M_lumped^{-1} A sigma when v matches the product field.
Eigen::SparseMatrix<double> assemble_divergence_form(const Mesh& mesh, const AdvectionField& v);

}  // namespace matmi

#endif
