#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "shearspec/geometry.hpp"
#include "shearspec/mesh.hpp"

namespace shearspec {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Free-node numbering after Dirichlet elimination.
struct DofMap {
  std::vector<int> node_to_dof;  // -1 on Dirichlet nodes
  std::vector<int> dof_to_node;

  Eigen::Index size() const { return static_cast<Eigen::Index>(dof_to_node.size()); }
  static DofMap eliminate_dirichlet(const StructuredMesh& mesh);
  static DofMap all_nodes(const StructuredMesh& mesh);
  /// Node vector with zeros on eliminated nodes.
  Eigen::VectorXd expand(const Eigen::VectorXd& dof_values) const;
  Eigen::VectorXd restrict(const Eigen::VectorXd& node_values) const;
};

struct AssembledOperator {
  SparseMatrix stiffness;
  SparseMatrix mass;
  DofMap dofs;

  Eigen::Index size() const { return stiffness.rows(); }
};

/// Coefficient matrix C on element e (centroid passed in) for int grad u . C grad v.
using CoefficientField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;
/// Scalar weight w(s, t).
using WeightField = std::function<double(const Eigen::Vector2d&)>;

SparseMatrix assemble_stiffness(const StructuredMesh& mesh, const DofMap& dofs,
                                const CoefficientField& coeff);
SparseMatrix assemble_mass(const StructuredMesh& mesh, const DofMap& dofs);

/// h[psi] = ||d_s psi - f' d_t psi||^2 + ||d_t psi||^2 with f' sampled at
/// element centroids; Dirichlet nodes eliminated.
AssembledOperator assemble_h(const StructuredMesh& mesh, const ShearProfile& profile);

/// Discrete ||d_s psi||^2 and ||d_t psi||^2 on the same dofs as assemble_h.
struct GradientParts {
  SparseMatrix ss;
  SparseMatrix tt;
};
GradientParts gradient_parts(const StructuredMesh& mesh, const DofMap& dofs);

/// q_I in the variable phi = psi / chi_1 on a mesh of I x (0, d), no
/// boundary conditions. Stiffness integrand
///   (chi_1 (phi_s - f' phi_t) - eps chi_1' phi)^2 + chi_1^2 phi_t^2,
/// mass weighted by chi_1^2; seven-point quadrature per element.
AssembledOperator assemble_qI(const StructuredMesh& mesh, const ShearProfile& profile,
                              double d);

/// The two squares of q_I assembled separately (same dofs as assemble_qI).
struct QIParts {
  SparseMatrix shear;
  SparseMatrix transverse;
};
QIParts assemble_qI_parts(const StructuredMesh& mesh, const ShearProfile& profile,
                          double d);

enum class FiberForm { gauge, complex_doubled };

/// Fiber operator on (0, d) with Dirichlet ends and n_t intervals.
///  gauge:           -(1+beta^2) u'' + xi^2/(1+beta^2) u
///  complex_doubled: the Hermitian form xi^2 M + (1+beta^2) K + i xi beta (D - D^T)
///                   written as the real symmetric system [[R, -J], [J, R]];
///                   every eigenvalue appears twice.
AssembledOperator assemble_tbeta_1d(double d, double beta, double xi, int n_t,
                                    FiberForm form = FiberForm::gauge);

enum class PotentialRule { centroid, seven_point };

/// W with y^T W y ~ int w |psi_h|^2. Throws PreconditionError naming the
/// element when a weight sample is not finite.
SparseMatrix assemble_potential(const StructuredMesh& mesh, const DofMap& dofs,
                                const WeightField& w,
                                PotentialRule rule = PotentialRule::centroid);

/// Nodal interpolant restricted to dofs.
Eigen::VectorXd interpolate(const StructuredMesh& mesh, const DofMap& dofs,
                            const WeightField& f);

/// Coordinate listing "row col value", one nonzero per line, 0-based.
void write_coo(std::ostream& out, const SparseMatrix& matrix);

}  // namespace shearspec
