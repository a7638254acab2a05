#include "shearspec/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace shearspec {

void EigOptions::validate() const {
  if (k < 1) throw PreconditionError("EigOptions.k must be >= 1");
  if (!(tol > 0.0)) throw PreconditionError("EigOptions.tol must be positive");
  if (max_iter < 1) throw PreconditionError("EigOptions.max_iter must be >= 1");
  if (shift && !std::isfinite(*shift)) throw PreconditionError("EigOptions.shift must be finite");
}

namespace {

using LDLT = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

struct Inertia {
  Eigen::Index negative = 0;
  bool singular = false;
};

Inertia inertia(const LDLT& ldlt) {
  const Eigen::VectorXd D = ldlt.vectorD();
  Inertia out;
  const double big = D.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < D.size(); ++i) {
    if (D(i) < 0.0) ++out.negative;
    if (std::abs(D(i)) <= 1e-13 * big) out.singular = true;
  }
  return out;
}

void check_pair(const SparseMatrix& A, const SparseMatrix& M) {
  if (A.rows() != A.cols() || M.rows() != M.cols() || A.rows() != M.rows())
    throw PreconditionError("eigensolver: dimension mismatch");
  if (A.rows() == 0) throw PreconditionError("eigensolver: empty problem");
}

}  // namespace

Eigen::Index count_below(const SparseMatrix& A, const SparseMatrix& M, double x) {
  check_pair(A, M);
  const SparseMatrix S = A - x * M;
  LDLT ldlt(S);
  if (ldlt.info() != Eigen::Success) throw Error("count_below: factorisation failed");
  return inertia(ldlt).negative;
}

double relative_residual(const SparseMatrix& A, const SparseMatrix& M, const Eigen::VectorXd& x,
                         double lambda, double shift) {
  const Eigen::VectorXd Ax = A * x;
  const Eigen::VectorXd Mx = M * x;
  const double denom = std::max(Ax.norm(), (Ax - shift * Mx).norm());
  if (denom == 0.0) return 0.0;
  return (Ax - lambda * Mx).norm() / denom;
}

EigResult smallest_eigs(const SparseMatrix& A, const SparseMatrix& M, const EigOptions& opts) {
  opts.validate();
  check_pair(A, M);
  const Eigen::Index n = A.rows();
  if (opts.k > n) throw PreconditionError("EigOptions.k exceeds the problem dimension");
  const int k = opts.k;

  // Shift below the spectrum: lower it until the inertia shows no
  // eigenvalue under it; nudge it off a singular pivot.
  double sigma = opts.shift.value_or(0.0);
  double step = 0.25 * std::max(1.0, std::abs(sigma));
  LDLT ldlt;
  SparseMatrix S = A - sigma * M;
  ldlt.analyzePattern(S);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 80) throw Error("eigensolver: could not place the shift below the spectrum");
    S = A - sigma * M;
    ldlt.factorize(S);
    if (ldlt.info() != Eigen::Success) {
      sigma -= 1e-6 * std::max(1.0, std::abs(sigma));
      continue;
    }
    const Inertia in = inertia(ldlt);
    if (in.negative > 0) {
      sigma -= step;
      step *= 2.0;
      continue;
    }
    if (in.singular) {
      sigma -= 1e-6 * std::max(1.0, std::abs(sigma));
      continue;
    }
    break;
  }

  const int m = static_cast<int>(
      std::min<Eigen::Index>(n, opts.ncv > 0 ? std::max(opts.ncv, k + 1) : std::max(3 * k, k + 40)));
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n, m + 1);
  Eigen::MatrixXd MV = Eigen::MatrixXd::Zero(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) r(i) = normal(rng);
    return r;
  };
  // Two passes of classical Gram-Schmidt in the M inner product against
  // the first `cols` basis vectors; returns the accumulated coefficients.
  auto orthogonalize = [&](Eigen::VectorXd& w, int cols) {
    Eigen::VectorXd h = MV.leftCols(cols).transpose() * w;
    w.noalias() -= V.leftCols(cols) * h;
    const Eigen::VectorXd h2 = MV.leftCols(cols).transpose() * w;
    w.noalias() -= V.leftCols(cols) * h2;
    return Eigen::VectorXd(h + h2);
  };
  auto set_column = [&](int j, const Eigen::VectorXd& w, const Eigen::VectorXd& Mw, double norm) {
    V.col(j) = w / norm;
    MV.col(j) = Mw / norm;
  };

  {
    const Eigen::VectorXd v = random_vector();
    const Eigen::VectorXd Mv = M * v;
    set_column(0, v, Mv, std::sqrt(v.dot(Mv)));
  }

  int kept = 0;
  int applications = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < opts.max_iter; ++restart) {
    for (int j = kept; j < m; ++j) {
      Eigen::VectorXd w = ldlt.solve(MV.col(j));
      ++applications;
      const double w_norm = std::sqrt(std::max(0.0, w.dot(M * w)));
      H.col(j).head(j + 1) = orthogonalize(w, j + 1);
      Eigen::VectorXd Mw = M * w;
      double beta = std::sqrt(std::max(0.0, w.dot(Mw)));
      if (beta > 1e-10 * w_norm && beta > 0.0) {
        H(j + 1, j) = beta;
        set_column(j + 1, w, Mw, beta);
        continue;
      }
      // Invariant subspace: continue from a fresh direction.
      H(j + 1, j) = 0.0;
      if (j + 1 >= n) {
        V.col(j + 1).setZero();
        MV.col(j + 1).setZero();
        continue;
      }
      Eigen::VectorXd r = random_vector();
      orthogonalize(r, j + 1);
      const Eigen::VectorXd Mr = M * r;
      set_column(j + 1, r, Mr, std::sqrt(r.dot(Mr)));
    }

    Eigen::MatrixXd T = H.topRows(m);
    T = (0.5 * (T + T.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::VectorXd& theta = es.eigenvalues();  // ascending; wanted = largest
    const Eigen::MatrixXd& Y = es.eigenvectors();
    const double h_next = H(m, m - 1);

    EigResult result;
    result.values.resize(k);
    result.vectors.resize(n, k);
    result.residuals.resize(k);
    bool all = true;
    worst = 0.0;
    for (int i = 0; i < k; ++i) {
      const int col = m - 1 - i;
      const double th = theta(col);
      if (!(th > 0.0)) {
        all = false;
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      const double lambda = sigma + 1.0 / th;
      Eigen::VectorXd x = V.leftCols(m) * Y.col(col);
      x /= std::sqrt(x.dot(M * x));
      const double res = relative_residual(A, M, x, lambda, sigma);
      result.values(i) = lambda;
      result.vectors.col(i) = x;
      result.residuals(i) = res;
      worst = std::max(worst, res);
      if (res > opts.tol) all = false;
    }
    if (all) {
      result.iterations = applications;
      result.shift_used = sigma;
      if (opts.observer) opts.observer(A, M, result);
      return result;
    }

    // Thick restart: keep the leading Ritz vectors and the residual direction.
    const int p = std::min(m - 1, std::max(k + (m - k) / 2, k + 1));
    if (p <= 0 || m <= k) {
      // Full space already spanned; nothing left to gain.
      break;
    }
    const Eigen::MatrixXd Yp = Y.rightCols(p);
    const Eigen::MatrixXd Vp = V.leftCols(m) * Yp;
    const Eigen::MatrixXd MVp = MV.leftCols(m) * Yp;
    const Eigen::VectorXd v_next = V.col(m);
    const Eigen::VectorXd Mv_next = MV.col(m);
    V.leftCols(p) = Vp;
    MV.leftCols(p) = MVp;
    V.col(p) = v_next;
    MV.col(p) = Mv_next;
    H.setZero();
    for (int i = 0; i < p; ++i) {
      H(i, i) = theta(m - p + i);
      H(p, i) = h_next * Yp(m - 1, i);
    }
    kept = p;
  }
  std::ostringstream msg;
  msg << "eigensolver did not converge: worst relative residual " << worst;
  throw ConvergenceError(msg.str(), worst);
}

}  // namespace shearspec
