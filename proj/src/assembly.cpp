#include "shearspec/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <tuple>

#include "shearspec/error.hpp"
#include "shearspec/p1.hpp"

namespace shearspec {

const std::array<TriangleQuadPoint, 7>& triangle_rule7() {
  static const std::array<TriangleQuadPoint, 7> rule = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    return std::array<TriangleQuadPoint, 7>{{{1.0 / 3.0, 1.0 / 3.0, 0.225},
                                             {b1, b1, w1},
                                             {a1, b1, w1},
                                             {b1, a1, w1},
                                             {b2, b2, w2},
                                             {a2, b2, w2},
                                             {b2, a2, w2}}};
  }();
  return rule;
}

DofMap DofMap::eliminate_dirichlet(const StructuredMesh& mesh) {
  const std::vector<bool> fixed = mesh.dirichlet_nodes();
  DofMap map;
  map.node_to_dof.assign(fixed.size(), -1);
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i]) continue;
    map.node_to_dof[i] = static_cast<int>(map.dof_to_node.size());
    map.dof_to_node.push_back(static_cast<int>(i));
  }
  return map;
}

DofMap DofMap::all_nodes(const StructuredMesh& mesh) {
  DofMap map;
  const auto n = static_cast<int>(mesh.num_nodes());
  map.node_to_dof.resize(static_cast<std::size_t>(n));
  map.dof_to_node.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) map.node_to_dof[i] = map.dof_to_node[i] = i;
  return map;
}

Eigen::VectorXd DofMap::expand(const Eigen::VectorXd& dof_values) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(node_to_dof.size()));
  for (std::size_t k = 0; k < dof_to_node.size(); ++k)
    out(dof_to_node[k]) = dof_values(static_cast<Eigen::Index>(k));
  return out;
}

Eigen::VectorXd DofMap::restrict(const Eigen::VectorXd& node_values) const {
  Eigen::VectorXd out(size());
  for (std::size_t k = 0; k < dof_to_node.size(); ++k)
    out(static_cast<Eigen::Index>(k)) = node_values(dof_to_node[k]);
  return out;
}

namespace {

using Triangle = P1Triangle<double>;

Triangle element(const StructuredMesh& mesh, Eigen::Index e) {
  return Triangle(mesh.node(mesh.elements(e, 0)), mesh.node(mesh.elements(e, 1)),
                  mesh.node(mesh.elements(e, 2)));
}

// Sums local matrices into a sparse matrix. Triplets are sorted by
// (row, col, value) before summation, so the result does not depend on the
// element order and (i, j), (j, i) receive bit-identical sums.
template <typename Local>
SparseMatrix assemble(const StructuredMesh& mesh, const DofMap& dofs, Local&& local) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * 9);
  for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
    const Eigen::Matrix3d m = local(e, element(mesh, e));
    for (int i = 0; i < 3; ++i) {
      const int r = dofs.node_to_dof[static_cast<std::size_t>(mesh.elements(e, i))];
      if (r < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int c = dofs.node_to_dof[static_cast<std::size_t>(mesh.elements(e, j))];
        if (c < 0) continue;
        triplets.emplace_back(r, c, m(i, j));
      }
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.row(), a.col(), a.value()) <
           std::make_tuple(b.row(), b.col(), b.value());
  });
  SparseMatrix out(dofs.size(), dofs.size());
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

Eigen::Matrix2d shear_coefficient(double fp) {
  Eigen::Matrix2d c;
  c << 1.0, -fp, -fp, 1.0 + fp * fp;
  return c;
}

}  // namespace

SparseMatrix assemble_stiffness(const StructuredMesh& mesh, const DofMap& dofs,
                                const CoefficientField& coeff) {
  return assemble(mesh, dofs, [&](Eigen::Index, const Triangle& tri) -> Eigen::Matrix3d {
    return tri.stiffness(coeff(tri.centroid()));
  });
}

SparseMatrix assemble_mass(const StructuredMesh& mesh, const DofMap& dofs) {
  return assemble(mesh, dofs,
                  [](Eigen::Index, const Triangle& tri) -> Eigen::Matrix3d { return tri.mass(); });
}

AssembledOperator assemble_h(const StructuredMesh& mesh, const ShearProfile& profile) {
  AssembledOperator op;
  op.dofs = DofMap::eliminate_dirichlet(mesh);
  op.stiffness = assemble_stiffness(mesh, op.dofs, [&](const Eigen::Vector2d& x) {
    return shear_coefficient(eval_fprime(profile, x.x()));
  });
  op.mass = assemble_mass(mesh, op.dofs);
  return op;
}

GradientParts gradient_parts(const StructuredMesh& mesh, const DofMap& dofs) {
  GradientParts parts;
  parts.ss = assemble_stiffness(mesh, dofs, [](const Eigen::Vector2d&) {
    return Eigen::Matrix2d{{1.0, 0.0}, {0.0, 0.0}};
  });
  parts.tt = assemble_stiffness(mesh, dofs, [](const Eigen::Vector2d&) {
    return Eigen::Matrix2d{{0.0, 0.0}, {0.0, 1.0}};
  });
  return parts;
}

namespace {

// Local matrices of the two squares of q_I and the weighted mass, by the
// seven-point rule. Basis data per point: value N and gradient.
struct QILocal {
  Eigen::Matrix3d shear = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d transverse = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
};

QILocal qI_local(const Triangle& tri, const ShearProfile& profile, double d) {
  QILocal out;
  for (const auto& q : triangle_rule7()) {
    const Eigen::Vector3d n(1.0 - q.l1 - q.l2, q.l1, q.l2);
    const Eigen::Vector2d x = tri.map(q.l1, q.l2);
    const double w = q.weight * tri.area;
    const double a = chi1(x.y(), d);
    const double c = chi1_derivative(x.y(), d);
    const double eps = profile.epsilon(x.x());
    const double fp = profile.beta + eps;
    // g_i = chi (d_s N_i - f' d_t N_i) - eps chi' N_i
    const Eigen::Vector3d g = a * (tri.grad.col(0) - fp * tri.grad.col(1)) - eps * c * n;
    const Eigen::Vector3d gt = a * tri.grad.col(1);
    out.shear += w * g * g.transpose();
    out.transverse += w * gt * gt.transpose();
    out.mass += w * a * a * n * n.transpose();
  }
  return out;
}

void check_qI_inputs(const ShearProfile& profile, double d) {
  if (profile.infinite_beta()) throw PreconditionError("q_I requires a finite beta");
  if (!(d > 0.0)) throw PreconditionError("degenerate geometry: d must be positive");
}

}  // namespace

AssembledOperator assemble_qI(const StructuredMesh& mesh, const ShearProfile& profile,
                              double d) {
  check_qI_inputs(profile, d);
  AssembledOperator op;
  op.dofs = DofMap::all_nodes(mesh);
  op.stiffness = assemble(mesh, op.dofs, [&](Eigen::Index, const Triangle& tri) -> Eigen::Matrix3d {
    const QILocal l = qI_local(tri, profile, d);
    return l.shear + l.transverse;
  });
  op.mass = assemble(mesh, op.dofs, [&](Eigen::Index, const Triangle& tri) -> Eigen::Matrix3d {
    return qI_local(tri, profile, d).mass;
  });
  return op;
}

QIParts assemble_qI_parts(const StructuredMesh& mesh, const ShearProfile& profile,
                          double d) {
  check_qI_inputs(profile, d);
  const DofMap dofs = DofMap::all_nodes(mesh);
  QIParts parts;
  parts.shear = assemble(mesh, dofs, [&](Eigen::Index, const Triangle& tri) -> Eigen::Matrix3d {
    return qI_local(tri, profile, d).shear;
  });
  parts.transverse = assemble(mesh, dofs, [&](Eigen::Index, const Triangle& tri) -> Eigen::Matrix3d {
    return qI_local(tri, profile, d).transverse;
  });
  return parts;
}

AssembledOperator assemble_tbeta_1d(double d, double beta, double xi, int n_t, FiberForm form) {
  if (n_t < 2) throw PreconditionError("mesh resolution must be >= 2");
  if (!(d > 0.0)) throw PreconditionError("degenerate geometry: d must be positive");
  if (!std::isfinite(beta)) throw PreconditionError("fiber operator requires a finite beta");
  const double h = d / n_t;
  const int n = n_t - 1;
  const double g = 1.0 + beta * beta;
  // Interior nodes 1..n_t-1 map to 0..n-1.
  std::vector<Eigen::Triplet<double>> k, m, dd;
  for (int e = 0; e < n_t; ++e) {
    const int ids[2] = {e - 1, e};
    const double ke[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
    const double me[2][2] = {{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}};
    // D_kj = int phi_j' phi_k on one element: phi_j' = -+1/h, int phi_k = h/2.
    const double de[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}};
    for (int a = 0; a < 2; ++a) {
      if (ids[a] < 0 || ids[a] >= n) continue;
      for (int b = 0; b < 2; ++b) {
        if (ids[b] < 0 || ids[b] >= n) continue;
        k.emplace_back(ids[a], ids[b], ke[a][b]);
        m.emplace_back(ids[a], ids[b], me[a][b]);
        dd.emplace_back(ids[a], ids[b], de[a][b]);
      }
    }
  }
  SparseMatrix K(n, n), M(n, n), D(n, n);
  K.setFromTriplets(k.begin(), k.end());
  M.setFromTriplets(m.begin(), m.end());
  D.setFromTriplets(dd.begin(), dd.end());

  AssembledOperator op;
  if (form == FiberForm::gauge) {
    op.stiffness = g * K + (xi * xi / g) * M;
    op.mass = M;
  } else {
    const SparseMatrix R = (xi * xi) * M + g * K;
    const SparseMatrix Dt = D.transpose();
    const SparseMatrix J = (xi * beta) * (D - Dt);
    std::vector<Eigen::Triplet<double>> big, bigm;
    auto put = [](std::vector<Eigen::Triplet<double>>& out, const SparseMatrix& block, int r0,
                  int c0, double sign) {
      for (int c = 0; c < block.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(block, c); it; ++it)
          if (it.value() != 0.0)
            out.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()),
                             sign * it.value());
    };
    put(big, R, 0, 0, 1.0);
    put(big, R, n, n, 1.0);
    put(big, J, 0, n, -1.0);
    put(big, J, n, 0, 1.0);
    put(bigm, M, 0, 0, 1.0);
    put(bigm, M, n, n, 1.0);
    op.stiffness.resize(2 * n, 2 * n);
    op.stiffness.setFromTriplets(big.begin(), big.end());
    op.mass.resize(2 * n, 2 * n);
    op.mass.setFromTriplets(bigm.begin(), bigm.end());
  }
  op.stiffness.makeCompressed();
  op.mass.makeCompressed();
  const int dim = static_cast<int>(op.stiffness.rows());
  op.dofs.dof_to_node.resize(static_cast<std::size_t>(dim));
  op.dofs.node_to_dof.resize(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) op.dofs.dof_to_node[i] = op.dofs.node_to_dof[i] = i;
  return op;
}

SparseMatrix assemble_potential(const StructuredMesh& mesh, const DofMap& dofs,
                                const WeightField& w, PotentialRule rule) {
  auto sample = [&](Eigen::Index e, const Eigen::Vector2d& x) {
    const double v = w(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite weight on element " << e << " at (" << x.x() << ", " << x.y() << ")";
      throw PreconditionError(msg.str());
    }
    return v;
  };
  return assemble(mesh, dofs, [&](Eigen::Index e, const Triangle& tri) -> Eigen::Matrix3d {
    if (rule == PotentialRule::centroid) return sample(e, tri.centroid()) * tri.mass();
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (const auto& q : triangle_rule7()) {
      const Eigen::Vector3d n(1.0 - q.l1 - q.l2, q.l1, q.l2);
      m += (q.weight * tri.area * sample(e, tri.map(q.l1, q.l2))) * n * n.transpose();
    }
    return m;
  });
}

Eigen::VectorXd interpolate(const StructuredMesh& mesh, const DofMap& dofs,
                            const WeightField& f) {
  Eigen::VectorXd out(dofs.size());
  for (Eigen::Index k = 0; k < dofs.size(); ++k)
    out(k) = f(mesh.node(dofs.dof_to_node[static_cast<std::size_t>(k)]));
  return out;
}

void write_coo(std::ostream& out, const SparseMatrix& matrix) {
  out.precision(17);
  for (int c = 0; c < matrix.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(matrix, c); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace shearspec
