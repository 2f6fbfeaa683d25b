#include "matmi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "matmi/errors.hpp"

namespace matmi {

namespace {

double signed_area(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  return 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) -
                (p2.x() - p0.x()) * (p1.y() - p0.y()));
}

}  // namespace

const std::array<std::array<double, 3>, 3>& Mesh::tri_quad_barycentric() {
  static const std::array<std::array<double, 3>, 3> pts = {{
      {{0.5, 0.5, 0.0}},
      {{0.0, 0.5, 0.5}},
      {{0.5, 0.0, 0.5}},
  }};
  return pts;
}

Vec2 Mesh::tri_quad_point(int elem, int q) const {
  const auto& bary = tri_quad_barycentric()[q];
  const auto& t = triangles[elem];
  return bary[0] * vertices[t[0]] + bary[1] * vertices[t[1]] + bary[2] * vertices[t[2]];
}

const std::array<double, 2>& Mesh::edge_quad_positions() {
  static const std::array<double, 2> pos = {0.5 - 0.5 / std::sqrt(3.0),
                                            0.5 + 0.5 / std::sqrt(3.0)};
  return pos;
}

Vec2 Mesh::edge_quad_point(const BoundaryEdge& e, int q) const {
  const double s = edge_quad_positions()[q];
  return (1.0 - s) * vertices[e.a] + s * vertices[e.b];
}

int Mesh::interior_vertex_count() const {
  int n = 0;
  for (char f : vertex_on_boundary)
    if (!f) ++n;
  return n;
}

double Mesh::total_area() const {
  double a = 0;
  for (double x : areas) a += x;
  return a;
}

int Mesh::euler_characteristic() const {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}]++;
    }
  return vertex_count() - static_cast<int>(edges.size()) + triangle_count();
}

void Mesh::finalize() {
  const int nt = triangle_count();
  areas.resize(nt);
  basis_gradients.resize(nt);
  centroids.resize(nt);
  cell_size = 0;

  for (int e = 0; e < nt; ++e) {
    auto& t = triangles[e];
    Vec2 p0 = vertices[t[0]], p1 = vertices[t[1]], p2 = vertices[t[2]];
    double a = signed_area(p0, p1, p2);
    if (a < 0) {  // enforce counterclockwise orientation
      std::swap(t[1], t[2]);
      std::swap(p1, p2);
      a = -a;
    }
    if (a <= 0) throw InputError("mesh: degenerate triangle " + std::to_string(e));
    areas[e] = a;
    centroids[e] = (p0 + p1 + p2) / 3.0;

    Eigen::Matrix<double, 2, 3> g;
    g.col(0) = Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / (2.0 * a);
    g.col(1) = Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / (2.0 * a);
    g.col(2) = Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / (2.0 * a);
    basis_gradients[e] = g;

    cell_size = std::max({cell_size, (p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
  }

  // Boundary edges: directed edges of CCW triangles that appear only once.
  std::map<std::pair<int, int>, std::pair<int, int>> once;  // (min,max) -> (count, elem)
  std::map<std::pair<int, int>, std::pair<int, int>> directed;  // (min,max) -> (a,b) as seen
  for (int e = 0; e < nt; ++e) {
    const auto& t = triangles[e];
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = once.find(key);
      if (it == once.end()) {
        once[key] = {1, e};
        directed[key] = {a, b};
      } else {
        it->second.first++;
      }
    }
  }

  boundary_edges.clear();
  vertex_on_boundary.assign(vertex_count(), 0);
  for (const auto& [key, cnt_elem] : once) {
    if (cnt_elem.first == 1) {
      BoundaryEdge be;
      auto [a, b] = directed[key];
      be.a = a;
      be.b = b;
      be.elem = cnt_elem.second;
      Vec2 tangent = vertices[b] - vertices[a];
      be.length = tangent.norm();
      be.normal = Vec2(tangent.y(), -tangent.x()) / be.length;
      boundary_edges.push_back(be);
      vertex_on_boundary[a] = 1;
      vertex_on_boundary[b] = 1;
    } else if (cnt_elem.first != 2) {
      throw InputError("mesh: edge shared by more than two triangles");
    }
  }
}

Mesh build_unit_square_mesh(int n, bool flip_diagonal) {
  if (n < 2) throw InputError("build_unit_square_mesh: n must be >= 2");
  Mesh m;
  m.domain = DomainKind::UnitSquare;
  m.n_cells = n;

  m.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

  auto idx = [n](int i, int j) { return j * (n + 1) + i; };
  m.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int v00 = idx(i, j), v10 = idx(i + 1, j), v01 = idx(i, j + 1), v11 = idx(i + 1, j + 1);
      if (!flip_diagonal) {
        m.triangles.push_back({v00, v10, v11});
        m.triangles.push_back({v00, v11, v01});
      } else {
        m.triangles.push_back({v00, v10, v01});
        m.triangles.push_back({v10, v11, v01});
      }
    }

  m.finalize();
  return m;
}

Mesh build_disk_mesh(const Vec2& center, double radius, int n_refine) {
  if (radius <= 0) throw InputError("build_disk_mesh: radius must be positive");
  if (n_refine < 0) throw InputError("build_disk_mesh: refinement level must be >= 0");

  std::vector<Vec2> verts;
  std::vector<std::array<int, 3>> tris;
  verts.push_back(center);
  for (int k = 0; k < 6; ++k) {
    double th = k * M_PI / 3.0;
    verts.push_back(center + radius * Vec2(std::cos(th), std::sin(th)));
  }
  for (int k = 0; k < 6; ++k) tris.push_back({0, 1 + k, 1 + (k + 1) % 6});

  for (int level = 0; level < n_refine; ++level) {
    // Edge use counts to recognize boundary edges of the current mesh.
    std::map<std::pair<int, int>, int> use;
    for (const auto& t : tris)
      for (int k = 0; k < 3; ++k) {
        int a = t[k], b = t[(k + 1) % 3];
        use[{std::min(a, b), std::max(a, b)}]++;
      }

    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec2 p = 0.5 * (verts[a] + verts[b]);
      if (use[key] == 1) p = center + radius * (p - center).normalized();
      int id = static_cast<int>(verts.size());
      verts.push_back(p);
      midpoint[key] = id;
      return id;
    };

    std::vector<std::array<int, 3>> next;
    next.reserve(4 * tris.size());
    for (const auto& t : tris) {
      int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m02 = mid(t[0], t[2]);
      next.push_back({t[0], m01, m02});
      next.push_back({t[1], m12, m01});
      next.push_back({t[2], m02, m12});
      next.push_back({m01, m12, m02});
    }
    tris = std::move(next);
  }

  Mesh m;
  m.domain = DomainKind::Disk;
  m.disk_center = center;
  m.disk_radius = radius;
  m.disk_level = n_refine;
  m.vertices = std::move(verts);
  m.triangles = std::move(tris);
  m.finalize();
  return m;
}

}  // namespace matmi
