#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "shearspec/assembly.hpp"
#include "shearspec/error.hpp"

namespace shearspec {

struct EigResult;

/// Receives every operator handed to smallest_eigs together with the result.
using EigObserver =
    std::function<void(const SparseMatrix& A, const SparseMatrix& M, const EigResult&)>;

struct EigOptions {
  int k = 1;
  double tol = 1e-8;
  /// Initial shift (0 when unset); lowered automatically while the inertia
  /// of A - shift M reports eigenvalues below it.
  std::optional<double> shift;
  int max_iter = 300;
  std::uint64_t seed = 0x5eed;
  /// Krylov basis size; 0 picks min(n, max(3k, k + 40)).
  int ncv = 0;
  EigObserver observer;

  void validate() const;
};

struct EigResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
  Eigen::VectorXd residuals;
  int iterations = 0;
  double shift_used = 0.0;
};

/// k smallest eigenpairs of A x = lambda M x by shift-invert Lanczos in the
/// M inner product with full reorthogonalisation and thick restart.
EigResult smallest_eigs(const SparseMatrix& A, const SparseMatrix& M, const EigOptions& opts);
inline EigResult smallest_eigs(const AssembledOperator& op, const EigOptions& opts) {
  return smallest_eigs(op.stiffness, op.mass, opts);
}

/// Number of eigenvalues of (A, M) strictly below x, from the inertia of
/// the LDL^T factorisation of A - x M.
Eigen::Index count_below(const SparseMatrix& A, const SparseMatrix& M, double x);

/// Relative residual ||A x - lambda M x|| / max(||A x||, ||(A - shift M) x||).
double relative_residual(const SparseMatrix& A, const SparseMatrix& M, const Eigen::VectorXd& x,
                         double lambda, double shift);

inline constexpr Eigen::Index kDenseOracleMaxDim = 2000;

/// Full generalized spectrum by Cholesky reduction of M and a dense
/// symmetric eigensolver.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dense_oracle(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& M) {
  if (A.rows() != A.cols() || M.rows() != M.cols() || A.rows() != M.rows())
    throw PreconditionError("dense_oracle: dimension mismatch");
  if (A.rows() > kDenseOracleMaxDim) throw PreconditionError("dense_oracle: dimension > 2000");
  Eigen::LLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(M);
  if (llt.info() != Eigen::Success) throw PreconditionError("dense_oracle: M is not SPD");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>
      solver(A, M, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw Error("dense_oracle: eigensolver failed");
  return solver.eigenvalues();
}

inline Eigen::VectorXd dense_oracle(const SparseMatrix& A, const SparseMatrix& M) {
  return dense_oracle<double>(Eigen::MatrixXd(A), Eigen::MatrixXd(M));
}

}  // namespace shearspec
