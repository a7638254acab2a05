#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "shearspec/geometry.hpp"

namespace shearspec {

enum class BoundaryTag : std::uint8_t { dirichlet, neumann };
enum class DomainKind { rectangle, right_triangle, quadrilateral };

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::dirichlet;
};

/// Structured P1 triangulation. Coordinates are (s, t) for strip meshes and
/// (x, y) for the Cartesian subdomains of the bracketing pipeline.
struct StructuredMesh {
  DomainKind kind = DomainKind::rectangle;
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes;
  Eigen::Matrix<int, Eigen::Dynamic, 3> elements;
  std::vector<BoundaryEdge> boundary;
  int n_s = 0;
  int n_t = 0;

  Eigen::Index num_nodes() const { return nodes.rows(); }
  Eigen::Index num_elements() const { return elements.rows(); }
  Eigen::Vector2d node(Eigen::Index i) const { return nodes.row(i).transpose(); }
  double signed_area(Eigen::Index e) const;
  Eigen::Vector2d centroid(Eigen::Index e) const;
  /// Nodes lying on at least one Dirichlet edge.
  std::vector<bool> dirichlet_nodes() const;
};

/// Rectangle [s0, s1] x [t0, t1]; `sides` are tags for bottom (t = t0),
/// right (s = s1), top (t = t1), left (s = s0).
StructuredMesh build_rectangle_mesh(double s0, double s1, double t0, double t1,
                                    int n_s, int n_t,
                                    const std::array<BoundaryTag, 4>& sides);

/// Truncated strip (-L, L) x (0, d); walls t = 0, d are Dirichlet, the ends
/// s = +-L carry `end_bc`.
StructuredMesh build_mesh(const StripGeometry& geometry, int n_s, int n_t,
                          BoundaryTag end_bc);

/// Triangle v0 v1 v2 with n subdivisions per side; sides are tagged
/// (v0v1, v1v2, v2v0).
StructuredMesh build_triangle_mesh(const std::array<Eigen::Vector2d, 3>& v, int n,
                                   const std::array<BoundaryTag, 3>& sides);

/// Quadrilateral with corners p0 p1 p2 p3 (counter-clockwise or clockwise),
/// meshed by transfinite interpolation. Sides are (p0p1, p1p2, p2p3, p3p0).
/// `curved_side` optionally replaces side p2p3 by a curve gamma(u), u in [0,1],
/// gamma(0) = p3, gamma(1) = p2.
StructuredMesh build_quad_mesh(const std::array<Eigen::Vector2d, 4>& p, int n_u, int n_v,
                               const std::array<BoundaryTag, 4>& sides,
                               const std::function<Eigen::Vector2d(double)>& curved_side = {});

/// Node/element listing: header line, one "x y" line per node, then one
/// "a b c" line per element, then one "a b tag" line per boundary edge.
void write_mesh(std::ostream& out, const StructuredMesh& mesh);

}  // namespace shearspec
