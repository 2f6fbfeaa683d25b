#ifndef MATMI_MESH_HPP
#define MATMI_MESH_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace matmi {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { UnitSquare, Disk };

struct BoundaryEdge {
  int a = -1;  // vertex indices, ordered counterclockwise along the boundary
  int b = -1;
  int elem = -1;      // the single adjacent triangle
  Vec2 normal{0, 0};  // outward unit normal
  double length = 0;
};

// Piecewise-linear triangulation of the unit square or of a disk.
// Immutable after construction; per-element geometry (areas, barycentric
// gradients, centroids) is precomputed so assembly loops stay cheap.
class Mesh {
 public:
  DomainKind domain = DomainKind::UnitSquare;
  int n_cells = 0;  // unit square: cells per direction
  Vec2 disk_center{0, 0};
  double disk_radius = 0;
  int disk_level = 0;

  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<char> vertex_on_boundary;

  double cell_size = 0;  // h: maximum edge length

  // Per-element data, indexed like `triangles`.
  std::vector<double> areas;
  std::vector<Eigen::Matrix<double, 2, 3>> basis_gradients;  // column i = grad of phi_i
  std::vector<Vec2> centroids;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  int interior_vertex_count() const;
  double total_area() const;

  Vec2 vertex_of(int elem, int local) const { return vertices[triangles[elem][local]]; }

  // Three-point edge-midpoint rule, exact for quadratics.
  static constexpr int kTriQuadPoints = 3;
  static const std::array<std::array<double, 3>, 3>& tri_quad_barycentric();
  Vec2 tri_quad_point(int elem, int q) const;

  // Two-point Gauss rule on boundary edges, exact for cubics.
  static constexpr int kEdgeQuadPoints = 2;
  static const std::array<double, 2>& edge_quad_positions();  // in [0,1] along the edge
  Vec2 edge_quad_point(const BoundaryEdge& e, int q) const;

  // Euler characteristic sanity value V - E + T (1 for a disk-like domain).
  int euler_characteristic() const;

  void finalize();  // computes geometry, boundary data, h; called by builders
};

// Uniform triangulation of [0,1]^2 with n cells per direction, two triangles
// per cell with a fixed diagonal. `flip_diagonal` selects the other diagonal.
Mesh build_unit_square_mesh(int n, bool flip_diagonal = false);

// Quasi-uniform disk mesh: regular hexagon refined `n_refine` times, new
// boundary vertices projected onto the circle.
Mesh build_disk_mesh(const Vec2& center, double radius, int n_refine);

}  // namespace matmi

#endif
