#include "shearspec/mesh.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "shearspec/error.hpp"

namespace shearspec {

double StructuredMesh::signed_area(Eigen::Index e) const {
  const Eigen::Vector2d a = node(elements(e, 0));
  const Eigen::Vector2d b = node(elements(e, 1));
  const Eigen::Vector2d c = node(elements(e, 2));
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Eigen::Vector2d StructuredMesh::centroid(Eigen::Index e) const {
  return (node(elements(e, 0)) + node(elements(e, 1)) + node(elements(e, 2))) / 3.0;
}

std::vector<bool> StructuredMesh::dirichlet_nodes() const {
  std::vector<bool> fixed(static_cast<std::size_t>(num_nodes()), false);
  for (const auto& edge : boundary) {
    if (edge.tag != BoundaryTag::dirichlet) continue;
    fixed[static_cast<std::size_t>(edge.a)] = true;
    fixed[static_cast<std::size_t>(edge.b)] = true;
  }
  return fixed;
}

namespace {

// Triangulates an (n_u+1) x (n_v+1) grid of already placed nodes with the
// union-jack pattern: the diagonal of cell (i, j) alternates with i + j, so
// halving the spacing nests the coarse space in the fine one.
void triangulate_grid(StructuredMesh& mesh, int n_u, int n_v,
                      const std::array<BoundaryTag, 4>& sides) {
  auto id = [n_u](int i, int j) { return j * (n_u + 1) + i; };
  mesh.elements.resize(2 * n_u * n_v, 3);
  Eigen::Index e = 0;
  for (int j = 0; j < n_v; ++j) {
    for (int i = 0; i < n_u; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if ((i + j) % 2 == 0) {
        mesh.elements.row(e++) << a, b, c;
        mesh.elements.row(e++) << a, c, d;
      } else {
        mesh.elements.row(e++) << a, b, d;
        mesh.elements.row(e++) << b, c, d;
      }
    }
  }
  for (int i = 0; i < n_u; ++i) {
    mesh.boundary.push_back({id(i, 0), id(i + 1, 0), sides[0]});
    mesh.boundary.push_back({id(i, n_v), id(i + 1, n_v), sides[2]});
  }
  for (int j = 0; j < n_v; ++j) {
    mesh.boundary.push_back({id(n_u, j), id(n_u, j + 1), sides[1]});
    mesh.boundary.push_back({id(0, j), id(0, j + 1), sides[3]});
  }
}

void orient_and_check(StructuredMesh& mesh) {
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    double area = mesh.signed_area(e);
    if (area < 0.0) {
      std::swap(mesh.elements(e, 1), mesh.elements(e, 2));
      area = -area;
    }
    if (!(area > 0.0) || !std::isfinite(area)) {
      std::ostringstream msg;
      msg << "degenerate geometry: element " << e << " has zero area";
      throw PreconditionError(msg.str());
    }
  }
}

}  // namespace

StructuredMesh build_rectangle_mesh(double s0, double s1, double t0, double t1,
                                    int n_s, int n_t,
                                    const std::array<BoundaryTag, 4>& sides) {
  if (n_s < 2 || n_t < 2) throw PreconditionError("mesh resolution must be >= 2");
  if (!(s1 > s0) || !(t1 > t0)) throw PreconditionError("degenerate geometry: empty rectangle");
  StructuredMesh mesh;
  mesh.kind = DomainKind::rectangle;
  mesh.n_s = n_s;
  mesh.n_t = n_t;
  mesh.nodes.resize((n_s + 1) * (n_t + 1), 2);
  for (int j = 0; j <= n_t; ++j)
    for (int i = 0; i <= n_s; ++i)
      mesh.nodes.row(j * (n_s + 1) + i) << s0 + (s1 - s0) * i / n_s, t0 + (t1 - t0) * j / n_t;
  triangulate_grid(mesh, n_s, n_t, sides);
  orient_and_check(mesh);
  return mesh;
}

StructuredMesh build_mesh(const StripGeometry& geometry, int n_s, int n_t,
                          BoundaryTag end_bc) {
  if (!(geometry.d > 0.0) || !(geometry.L > 0.0))
    throw PreconditionError("degenerate geometry: d and L must be positive");
  return build_rectangle_mesh(-geometry.L, geometry.L, 0.0, geometry.d, n_s, n_t,
                              {BoundaryTag::dirichlet, end_bc, BoundaryTag::dirichlet, end_bc});
}

StructuredMesh build_triangle_mesh(const std::array<Eigen::Vector2d, 3>& v, int n,
                                   const std::array<BoundaryTag, 3>& sides) {
  if (n < 2) throw PreconditionError("mesh resolution must be >= 2");
  StructuredMesh mesh;
  mesh.kind = DomainKind::right_triangle;
  mesh.n_s = n;
  mesh.n_t = n;
  // Node (i, j), i + j <= n, sits at v0 + i/n (v1 - v0) + j/n (v2 - v0).
  std::vector<std::vector<int>> id(static_cast<std::size_t>(n + 1));
  int count = 0;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i + j <= n; ++i) {
      id[static_cast<std::size_t>(i)].push_back(count++);
    }
  auto at = [&](int i, int j) { return id[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  mesh.nodes.resize(count, 2);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i + j <= n; ++i) {
      const Eigen::Vector2d x = v[0] + (double(i) / n) * (v[1] - v[0]) + (double(j) / n) * (v[2] - v[0]);
      mesh.nodes.row(at(i, j)) = x.transpose();
    }
  std::vector<Eigen::Vector3i> tris;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + j < n; ++i) {
      tris.emplace_back(at(i, j), at(i + 1, j), at(i, j + 1));
      if (i + j < n - 1) tris.emplace_back(at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
    }
  mesh.elements.resize(static_cast<Eigen::Index>(tris.size()), 3);
  for (std::size_t e = 0; e < tris.size(); ++e)
    mesh.elements.row(static_cast<Eigen::Index>(e)) = tris[e].transpose();
  for (int k = 0; k < n; ++k) {
    mesh.boundary.push_back({at(k, 0), at(k + 1, 0), sides[0]});
    mesh.boundary.push_back({at(n - k, k), at(n - k - 1, k + 1), sides[1]});
    mesh.boundary.push_back({at(0, n - k), at(0, n - k - 1), sides[2]});
  }
  orient_and_check(mesh);
  return mesh;
}

StructuredMesh build_quad_mesh(const std::array<Eigen::Vector2d, 4>& p, int n_u, int n_v,
                               const std::array<BoundaryTag, 4>& sides,
                               const std::function<Eigen::Vector2d(double)>& curved_side) {
  if (n_u < 2 || n_v < 2) throw PreconditionError("mesh resolution must be >= 2");
  StructuredMesh mesh;
  mesh.kind = DomainKind::quadrilateral;
  mesh.n_s = n_u;
  mesh.n_t = n_v;
  // Coons patch: bottom p0->p1 (v=0), right p1->p2 (u=1), top p3->p2 (v=1),
  // left p0->p3 (u=0).
  auto bottom = [&](double u) -> Eigen::Vector2d { return (1 - u) * p[0] + u * p[1]; };
  auto top = [&](double u) -> Eigen::Vector2d {
    if (curved_side) return curved_side(u);
    return (1 - u) * p[3] + u * p[2];
  };
  auto left = [&](double v) -> Eigen::Vector2d { return (1 - v) * p[0] + v * p[3]; };
  auto right = [&](double v) -> Eigen::Vector2d { return (1 - v) * p[1] + v * p[2]; };
  mesh.nodes.resize((n_u + 1) * (n_v + 1), 2);
  for (int j = 0; j <= n_v; ++j) {
    const double v = double(j) / n_v;
    for (int i = 0; i <= n_u; ++i) {
      const double u = double(i) / n_u;
      const Eigen::Vector2d x = (1 - v) * bottom(u) + v * top(u) + (1 - u) * left(v) +
                                u * right(v) -
                                ((1 - u) * (1 - v) * p[0] + u * (1 - v) * p[1] +
                                 u * v * p[2] + (1 - u) * v * p[3]);
      mesh.nodes.row(j * (n_u + 1) + i) = x.transpose();
    }
  }
  // triangulate_grid tags (bottom, right, top, left) = (p0p1, p1p2, p3p2, p0p3).
  triangulate_grid(mesh, n_u, n_v, {sides[0], sides[1], sides[2], sides[3]});
  orient_and_check(mesh);
  return mesh;
}

void write_mesh(std::ostream& out, const StructuredMesh& mesh) {
  out.precision(17);
  out << mesh.num_nodes() << ' ' << mesh.num_elements() << ' ' << mesh.boundary.size() << '\n';
  for (Eigen::Index i = 0; i < mesh.num_nodes(); ++i)
    out << mesh.nodes(i, 0) << ' ' << mesh.nodes(i, 1) << '\n';
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e)
    out << mesh.elements(e, 0) << ' ' << mesh.elements(e, 1) << ' ' << mesh.elements(e, 2) << '\n';
  for (const auto& edge : mesh.boundary)
    out << edge.a << ' ' << edge.b << ' '
        << (edge.tag == BoundaryTag::dirichlet ? "dirichlet" : "neumann") << '\n';
}

}  // namespace shearspec
