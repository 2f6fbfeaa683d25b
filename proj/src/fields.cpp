#include "matmi/fields.hpp"

#include <cmath>

#include "matmi/errors.hpp"

namespace matmi {

// ---- ScalarField ----

ScalarField::ScalarField(const Mesh& mesh, Eigen::VectorXd values)
    : mesh_(&mesh), values_(std::move(values)) {
  if (values_.size() != mesh.vertex_count())
    throw InputError("ScalarField: value count does not match vertex count");
}

ScalarField ScalarField::zero(const Mesh& mesh) {
  return ScalarField(mesh, Eigen::VectorXd::Zero(mesh.vertex_count()));
}

ScalarField ScalarField::constant(const Mesh& mesh, double value) {
  return ScalarField(mesh, Eigen::VectorXd::Constant(mesh.vertex_count(), value));
}

ScalarField ScalarField::from_function(const Mesh& mesh,
                                       const std::function<double(const Vec2&)>& f) {
  Eigen::VectorXd v(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) v[i] = f(mesh.vertices[i]);
  return ScalarField(mesh, std::move(v));
}

double ScalarField::at_bary(int elem, const double bary[3]) const {
  const auto& t = mesh_->triangles[elem];
  return bary[0] * values_[t[0]] + bary[1] * values_[t[1]] + bary[2] * values_[t[2]];
}

double ScalarField::at_quad(int elem, int q) const {
  return at_bary(elem, Mesh::tri_quad_barycentric()[q].data());
}

namespace {
void barycentric_of(const Mesh& mesh, int e, const Vec2& x, double b[3]);
}

double ScalarField::at_point(int elem, const Vec2& x) const {
  double b[3];
  barycentric_of(*mesh_, elem, x, b);
  return at_bary(elem, b);
}

// ---- VectorField ----

VectorField VectorField::element(const Mesh& mesh,
                                 Eigen::Matrix<double, Eigen::Dynamic, 2> per_elem) {
  if (per_elem.rows() != mesh.triangle_count())
    throw InputError("VectorField: element count mismatch");
  VectorField v;
  v.mesh_ = &mesh;
  v.rep_ = VectorRep::Element;
  v.elem_ = std::move(per_elem);
  return v;
}

VectorField VectorField::nodal(const Mesh& mesh,
                               Eigen::Matrix<double, Eigen::Dynamic, 2> per_node) {
  if (per_node.rows() != mesh.vertex_count())
    throw InputError("VectorField: nodal count mismatch");
  VectorField v;
  v.mesh_ = &mesh;
  v.rep_ = VectorRep::Nodal;
  v.nodal_ = std::move(per_node);
  return v;
}

VectorField VectorField::nodal_plus_element(const Mesh& mesh,
                                            Eigen::Matrix<double, Eigen::Dynamic, 2> per_node,
                                            Eigen::Matrix<double, Eigen::Dynamic, 2> per_elem) {
  if (per_node.rows() != mesh.vertex_count() || per_elem.rows() != mesh.triangle_count())
    throw InputError("VectorField: size mismatch");
  VectorField v;
  v.mesh_ = &mesh;
  v.rep_ = VectorRep::NodalPlusElement;
  v.nodal_ = std::move(per_node);
  v.elem_ = std::move(per_elem);
  return v;
}

VectorField VectorField::from_function(const Mesh& mesh,
                                       const std::function<Vec2(const Vec2&)>& f) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> v(mesh.vertex_count(), 2);
  for (int i = 0; i < mesh.vertex_count(); ++i) v.row(i) = f(mesh.vertices[i]).transpose();
  return nodal(mesh, std::move(v));
}

Vec2 VectorField::at_bary(int elem, const double bary[3]) const {
  Vec2 out(0, 0);
  if (rep_ != VectorRep::Element) {
    const auto& t = mesh_->triangles[elem];
    for (int k = 0; k < 3; ++k) out += bary[k] * nodal_.row(t[k]).transpose();
  }
  if (rep_ != VectorRep::Nodal) out += elem_.row(elem).transpose();
  return out;
}

Vec2 VectorField::at_quad(int elem, int q) const {
  return at_bary(elem, Mesh::tri_quad_barycentric()[q].data());
}

Vec2 VectorField::at_centroid(int elem) const {
  static const double b[3] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return at_bary(elem, b);
}

Vec2 VectorField::at_point(int elem, const Vec2& x) const {
  double b[3];
  barycentric_of(*mesh_, elem, x, b);
  return at_bary(elem, b);
}

Eigen::Matrix2d VectorField::jacobian(int elem) const {
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  if (rep_ != VectorRep::Element) {
    const auto& t = mesh_->triangles[elem];
    const auto& g = mesh_->basis_gradients[elem];
    for (int k = 0; k < 3; ++k) J += nodal_.row(t[k]).transpose() * g.col(k).transpose();
  }
  return J;
}

double VectorField::divergence(int elem) const {
  Eigen::Matrix2d J = jacobian(elem);
  return J(0, 0) + J(1, 1);
}

double VectorField::curl(int elem) const {
  Eigen::Matrix2d J = jacobian(elem);
  return J(1, 0) - J(0, 1);
}

// ---- TensorField ----

TensorField::TensorField(const Mesh& mesh, Eigen::VectorXd d11, Eigen::VectorXd d12,
                         Eigen::VectorXd d22)
    : mesh_(&mesh), d11_(std::move(d11)), d12_(std::move(d12)), d22_(std::move(d22)) {
  const int n = mesh.vertex_count();
  if (d11_.size() != n || d12_.size() != n || d22_.size() != n)
    throw InputError("TensorField: coefficient count mismatch");
}

TensorField TensorField::identity(const Mesh& mesh) {
  const int n = mesh.vertex_count();
  return TensorField(mesh, Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n),
                     Eigen::VectorXd::Ones(n));
}

TensorField TensorField::from_functions(const Mesh& mesh,
                                        const std::function<double(const Vec2&)>& f11,
                                        const std::function<double(const Vec2&)>& f12,
                                        const std::function<double(const Vec2&)>& f22) {
  const int n = mesh.vertex_count();
  Eigen::VectorXd a(n), b(n), c(n);
  for (int i = 0; i < n; ++i) {
    a[i] = f11(mesh.vertices[i]);
    b[i] = f12(mesh.vertices[i]);
    c[i] = f22(mesh.vertices[i]);
  }
  return TensorField(mesh, std::move(a), std::move(b), std::move(c));
}

Eigen::Matrix2d TensorField::at_node(int i) const {
  Eigen::Matrix2d D;
  D << d11_[i], d12_[i], d12_[i], d22_[i];
  return D;
}

Eigen::Matrix2d TensorField::at_bary(int elem, const double bary[3]) const {
  const auto& t = mesh_->triangles[elem];
  double a = 0, b = 0, c = 0;
  for (int k = 0; k < 3; ++k) {
    a += bary[k] * d11_[t[k]];
    b += bary[k] * d12_[t[k]];
    c += bary[k] * d22_[t[k]];
  }
  Eigen::Matrix2d D;
  D << a, b, b, c;
  return D;
}

Eigen::Matrix2d TensorField::at_quad(int elem, int q) const {
  return at_bary(elem, Mesh::tri_quad_barycentric()[q].data());
}

Eigen::Matrix2d TensorField::at_point(int elem, const Vec2& x) const {
  double b[3];
  barycentric_of(*mesh_, elem, x, b);
  return at_bary(elem, b);
}

void TensorField::eigenvalues_at_node(int i, double& lo, double& hi) const {
  const double mean = 0.5 * (d11_[i] + d22_[i]);
  const double rad = std::sqrt(0.25 * (d11_[i] - d22_[i]) * (d11_[i] - d22_[i]) +
                               d12_[i] * d12_[i]);
  lo = mean - rad;
  hi = mean + rad;
}

void TensorField::eigen_range(double& lo, double& hi, double& dist_to_identity) const {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  dist_to_identity = 0;
  for (int i = 0; i < d11_.size(); ++i) {
    double a, b;
    eigenvalues_at_node(i, a, b);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    dist_to_identity = std::max({dist_to_identity, std::abs(a - 1.0), std::abs(b - 1.0)});
  }
}

// ---- discrete vector calculus ----

namespace {

// Barycentric coordinates of x in element e.
void barycentric_of(const Mesh& mesh, int e, const Vec2& x, double b[3]) {
  const auto& t = mesh.triangles[e];
  const Vec2 p0 = mesh.vertices[t[0]], p1 = mesh.vertices[t[1]], p2 = mesh.vertices[t[2]];
  const double det =
      (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
  const double l1 =
      ((x.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (x.y() - p0.y())) / det;
  const double l2 =
      ((p1.x() - p0.x()) * (x.y() - p0.y()) - (x.x() - p0.x()) * (p1.y() - p0.y())) / det;
  b[0] = 1.0 - l1 - l2;
  b[1] = l1;
  b[2] = l2;
}

}  // namespace

VectorField p1_gradient(const ScalarField& f) {
  const Mesh& mesh = f.mesh();
  Eigen::Matrix<double, Eigen::Dynamic, 2> g(mesh.triangle_count(), 2);
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const auto& bg = mesh.basis_gradients[e];
    Vec2 ge = f[t[0]] * bg.col(0) + f[t[1]] * bg.col(1) + f[t[2]] * bg.col(2);
    g.row(e) = ge.transpose();
  }
  return VectorField::element(mesh, std::move(g));
}

Eigen::VectorXd lumped_mass(const Mesh& mesh) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const double w = mesh.areas[e] / 3.0;
    for (int k = 0; k < 3; ++k) m[mesh.triangles[e][k]] += w;
  }
  return m;
}

double l2_inner(const ScalarField& f, const ScalarField& g) {
  if (!f.same_mesh(g)) throw InputError("l2_inner: fields live on different meshes");
  const Mesh& mesh = f.mesh();
  double acc = 0;
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const double f0 = f[t[0]], f1 = f[t[1]], f2 = f[t[2]];
    const double g0 = g[t[0]], g1 = g[t[1]], g2 = g[t[2]];
    // Exact P1 mass matrix: A/12 * (2 I + ones).
    acc += mesh.areas[e] / 12.0 *
           (2.0 * (f0 * g0 + f1 * g1 + f2 * g2) + (f0 + f1 + f2) * (g0 + g1 + g2));
  }
  return acc;
}

double l2_norm(const ScalarField& f) { return std::sqrt(std::max(0.0, l2_inner(f, f))); }

double interior_l2_norm(const ScalarField& f) {
  const Mesh& mesh = f.mesh();
  Eigen::VectorXd v = f.values();
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (mesh.vertex_on_boundary[i]) v[i] = 0;
  return l2_norm(ScalarField(mesh, std::move(v)));
}

double relative_interior_error(const ScalarField& a, const ScalarField& b) {
  if (!a.same_mesh(b)) throw InputError("relative_interior_error: mesh mismatch");
  ScalarField diff(a.mesh(), a.values() - b.values());
  const double denom = interior_l2_norm(b);
  if (denom == 0) throw InputError("relative_interior_error: reference field is zero");
  return interior_l2_norm(diff) / denom;
}

ScalarField weak_divergence_of(const Mesh& mesh,
                               const std::function<Vec2(int, const Vec2&)>& w) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const auto& bg = mesh.basis_gradients[e];
    const double wq = mesh.areas[e] / 3.0;
    for (int q = 0; q < Mesh::kTriQuadPoints; ++q) {
      const Vec2 wv = w(e, mesh.tri_quad_point(e, q));
      for (int k = 0; k < 3; ++k) r[t[k]] -= wq * wv.dot(bg.col(k));
    }
  }
  for (const auto& be : mesh.boundary_edges) {
    const double half = 0.5 * be.length;
    for (int q = 0; q < Mesh::kEdgeQuadPoints; ++q) {
      const double s = Mesh::edge_quad_positions()[q];
      const Vec2 x = mesh.edge_quad_point(be, q);
      const double flux = w(be.elem, x).dot(be.normal);
      r[be.a] += half * flux * (1.0 - s);
      r[be.b] += half * flux * s;
    }
  }
  Eigen::VectorXd m = lumped_mass(mesh);
  return ScalarField(mesh, r.cwiseQuotient(m));
}

ScalarField weak_divergence(const VectorField& w) {
  return weak_divergence_of(w.mesh(), [&w](int e, const Vec2& x) {
    double b[3];
    barycentric_of(w.mesh(), e, x, b);
    return w.at_bary(e, b);
  });
}

Eigen::VectorXd curl_per_element(const VectorField& v) {
  Eigen::VectorXd c(v.mesh().triangle_count());
  for (int e = 0; e < v.mesh().triangle_count(); ++e) c[e] = v.curl(e);
  return c;
}

// ---- AdvectionField ----

AdvectionField AdvectionField::from_tensor_and_field(const TensorField& D, VectorField E) {
  AdvectionField a;
  a.mesh_ = &D.mesh();
  a.tensor_ = &D;
  a.field_ = std::move(E);
  a.cross_b0_ = true;
  return a;
}

AdvectionField AdvectionField::from_vector_field(VectorField v) {
  AdvectionField a;
  a.mesh_ = &v.mesh();
  a.field_ = std::move(v);
  return a;
}

AdvectionField AdvectionField::analytic(const Mesh& mesh, std::function<Vec2(const Vec2&)> value,
                                        std::function<double(const Vec2&)> divergence) {
  AdvectionField a;
  a.mesh_ = &mesh;
  a.fn_value_ = std::move(value);
  a.fn_div_ = std::move(divergence);
  return a;
}

Vec2 AdvectionField::value(int elem, const Vec2& x) const {
  if (fn_value_) return fn_value_(x);
  double b[3];
  barycentric_of(*mesh_, elem, x, b);
  Vec2 e = field_.at_bary(elem, b);
  if (!cross_b0_) return e;
  return cross_with_b0(tensor_->at_bary(elem, b) * e);
}

double AdvectionField::divergence(int elem, const Vec2& x) const {
  if (fn_div_) return fn_div_(x);
  if (!cross_b0_) return field_.divergence(elem);
  // v = (D e) x B0 with D nodal-linear and e element-affine:
  //   d_a v = rot( (d_a D) e + D (d_a e) ),  div v = d1 (De)_2 - d2 (De)_1.
  double b[3];
  barycentric_of(*mesh_, elem, x, b);
  const Eigen::Matrix2d D = tensor_->at_bary(elem, b);
  const Vec2 e = field_.at_bary(elem, b);
  const Eigen::Matrix2d Je = field_.jacobian(elem);

  const auto& t = mesh_->triangles[elem];
  const auto& bg = mesh_->basis_gradients[elem];
  Eigen::Matrix2d Dx = Eigen::Matrix2d::Zero();  // d D / d x1
  Eigen::Matrix2d Dy = Eigen::Matrix2d::Zero();  // d D / d x2
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix2d Dk;
    Dk << tensor_->d11()[t[k]], tensor_->d12()[t[k]], tensor_->d12()[t[k]],
        tensor_->d22()[t[k]];
    Dx += bg(0, k) * Dk;
    Dy += bg(1, k) * Dk;
  }
  const Vec2 dDe_dx = Dx * e + D * Je.col(0);
  const Vec2 dDe_dy = Dy * e + D * Je.col(1);
  return dDe_dx[1] - dDe_dy[0];
}

double AdvectionField::max_speed() const {
  if (max_speed_ >= 0) return max_speed_;
  double m = 0;
  for (int e = 0; e < mesh_->triangle_count(); ++e)
    for (int q = 0; q < Mesh::kTriQuadPoints; ++q)
      m = std::max(m, value(e, mesh_->tri_quad_point(e, q)).norm());
  max_speed_ = m;
  return m;
}

Eigen::SparseMatrix<double> assemble_divergence_form(const Mesh& mesh, const AdvectionField& v) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.triangle_count() * 9 + mesh.boundary_edges.size() * 4);
  const auto& bary = Mesh::tri_quad_barycentric();
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangles[e];
    const auto& bg = mesh.basis_gradients[e];
    const double wq = mesh.areas[e] / 3.0;
    for (int q = 0; q < Mesh::kTriQuadPoints; ++q) {
      const Vec2 vq = v.value(e, mesh.tri_quad_point(e, q));
      for (int i = 0; i < 3; ++i) {
        const double vdg = vq.dot(bg.col(i));
        for (int j = 0; j < 3; ++j)
          trip.emplace_back(t[i], t[j], -wq * bary[q][j] * vdg);
      }
    }
  }
  for (const auto& be : mesh.boundary_edges) {
    const double half = 0.5 * be.length;
    for (int q = 0; q < Mesh::kEdgeQuadPoints; ++q) {
      const double s = Mesh::edge_quad_positions()[q];
      const double flux = v.value(be.elem, mesh.edge_quad_point(be, q)).dot(be.normal);
      const double phi[2] = {1.0 - s, s};
      const int idx[2] = {be.a, be.b};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          trip.emplace_back(idx[i], idx[j], half * flux * phi[i] * phi[j]);
    }
  }
  Eigen::SparseMatrix<double> A(mesh.vertex_count(), mesh.vertex_count());
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

}  // namespace matmi
