#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shearspec/assembly.hpp"
#include "shearspec/eigensolve.hpp"
#include "shearspec/error.hpp"
#include "shearspec/mesh.hpp"

using namespace shearspec;
using std::numbers::pi;

namespace {

// 1-D P1 Dirichlet Laplacian on (0, 1) with n intervals (n - 1 dofs).
AssembledOperator laplacian_1d(int n) {
  const double h = 1.0 / n;
  const int m = n - 1;
  std::vector<Eigen::Triplet<double>> k, mm;
  for (int i = 0; i < m; ++i) {
    k.emplace_back(i, i, 2.0 / h);
    mm.emplace_back(i, i, 4.0 * h / 6.0);
    if (i + 1 < m) {
      k.emplace_back(i, i + 1, -1.0 / h);
      k.emplace_back(i + 1, i, -1.0 / h);
      mm.emplace_back(i, i + 1, h / 6.0);
      mm.emplace_back(i + 1, i, h / 6.0);
    }
  }
  AssembledOperator op;
  op.stiffness.resize(m, m);
  op.mass.resize(m, m);
  op.stiffness.setFromTriplets(k.begin(), k.end());
  op.mass.setFromTriplets(mm.begin(), mm.end());
  return op;
}

std::pair<SparseMatrix, SparseMatrix> random_spd_pair(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(n, n), Y(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      X(i, j) = normal(rng);
      Y(i, j) = normal(rng);
    }
  const Eigen::MatrixXd A = X.transpose() * X + Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd M = Y.transpose() * Y / n + Eigen::MatrixXd::Identity(n, n);
  return {A.sparseView(), M.sparseView()};
}

}  // namespace

TEST_SUITE("eigensolve") {

TEST_CASE("dense oracle on small pairs") {
  Eigen::MatrixXd A = Eigen::Vector3d(1, 2, 3).asDiagonal();
  Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::VectorXd v = dense_oracle<double>(A, I3);
  CHECK(v(0) == doctest::Approx(1.0));
  CHECK(v(2) == doctest::Approx(3.0));

  Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd M = Eigen::Vector2d(1, 4).asDiagonal();
  const Eigen::VectorXd w = dense_oracle<double>(I2, M);
  CHECK(w(0) == doctest::Approx(0.25));
  CHECK(w(1) == doctest::Approx(1.0));

  Eigen::MatrixXd bad = Eigen::Vector2d(1, -1).asDiagonal();
  CHECK_THROWS_AS(dense_oracle<double>(I2, bad), PreconditionError);
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(2001, 2001);
  CHECK_THROWS_AS(dense_oracle<double>(big, big), PreconditionError);
}

TEST_CASE("1-D Laplacian") {
  const AssembledOperator op = laplacian_1d(200);
  EigOptions eo;
  eo.k = 3;
  const EigResult r = smallest_eigs(op, eo);
  CHECK(r.values(0) == doctest::Approx(pi * pi).epsilon(1e-3));
  CHECK(r.values(0) > pi * pi);  // conforming: upper bound
  const Eigen::VectorXd all = dense_oracle(laplacian_1d(30).stiffness, laplacian_1d(30).mass);
  const EigResult r30 = smallest_eigs(laplacian_1d(30), eo);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r30.values(i) - all(i)) <= 1e-10 * std::max(1.0, all(i)));
}

TEST_CASE("result invariants on random SPD pairs") {
  const auto [A, M] = random_spd_pair(50, 9);
  EigOptions eo;
  eo.k = 6;
  const EigResult r = smallest_eigs(A, M, eo);
  const Eigen::VectorXd all = dense_oracle(A, M);
  for (int i = 0; i < eo.k; ++i) {
    CHECK(std::abs(r.values(i) - all(i)) <= 1e-10 * std::max(1.0, std::abs(all(i))));
    CHECK(r.residuals(i) <= eo.tol);
    if (i > 0) CHECK(r.values(i) >= r.values(i - 1));
  }
  const Eigen::MatrixXd gram = r.vectors.transpose() * M * r.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(eo.k, eo.k)).cwiseAbs().maxCoeff() < 1e-8);

  SUBCASE("deterministic for a fixed seed") {
    const EigResult again = smallest_eigs(A, M, eo);
    CHECK((again.values - r.values).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("a shift far above the spectrum is lowered automatically") {
    EigOptions high = eo;
    high.shift = all(20);
    const EigResult h = smallest_eigs(A, M, high);
    CHECK(std::abs(h.values(0) - all(0)) <= 1e-10 * std::max(1.0, all(0)));
    CHECK(h.shift_used < all(0));
  }
  SUBCASE("a shift exactly on an eigenvalue") {
    EigOptions on = eo;
    on.shift = all(0);
    const EigResult h = smallest_eigs(A, M, on);
    CHECK(std::abs(h.values(0) - all(0)) <= 1e-10 * std::max(1.0, all(0)));
  }
  SUBCASE("observer sees every solve") {
    int calls = 0;
    EigOptions watched = eo;
    watched.observer = [&](const SparseMatrix&, const SparseMatrix&, const EigResult&) { ++calls; };
    smallest_eigs(A, M, watched);
    CHECK(calls == 1);
  }
}

TEST_CASE("count_below uses the inertia") {
  const auto [A, M] = random_spd_pair(40, 3);
  const Eigen::VectorXd all = dense_oracle(A, M);
  for (int i : {0, 5, 17, 39}) {
    const double x = i == 39 ? all(39) + 1.0 : 0.5 * (all(i) + all(i + 1));
    CHECK(count_below(A, M, x) == i + 1);
  }
  CHECK(count_below(A, M, all(0) - 1.0) == 0);
}

TEST_CASE("straight strip ground state approaches E1 from above") {
  std::vector<double> lam;
  for (int n : {4, 8, 16}) {
    const StructuredMesh mesh = build_mesh(StripGeometry{pi, 10.0}, 10 * n, n, BoundaryTag::dirichlet);
    const EigResult r = smallest_eigs(assemble_h(mesh, ShearProfile::constant(0.0)), EigOptions{});
    lam.push_back(r.values(0));
  }
  CHECK(lam[0] > lam[1]);
  CHECK(lam[1] > lam[2]);
  CHECK(lam[2] > 1.0);
  CHECK(lam[2] < 1.03);
}

TEST_CASE("Rayleigh quotients dominate the reported minimum") {
  const StructuredMesh mesh = build_mesh(StripGeometry{1.0, 2.0}, 24, 8, BoundaryTag::dirichlet);
  const AssembledOperator op = assemble_h(
      mesh, ShearProfile::bump(0.5, Deficit{DeficitTerm::raised_cosine(-0.7, -1.0, 1.0, 1.0)}));
  const EigResult r = smallest_eigs(op, EigOptions{});
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd y(op.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);
    CHECK(r.values(0) <= y.dot(op.stiffness * y) / y.dot(op.mass * y));
  }
}

TEST_CASE("option validation") {
  const AssembledOperator op = laplacian_1d(10);
  EigOptions eo;
  eo.k = 0;
  CHECK_THROWS_AS(smallest_eigs(op, eo), PreconditionError);
  eo.k = 20;
  CHECK_THROWS_AS(smallest_eigs(op, eo), PreconditionError);
  eo.k = 1;
  eo.tol = 0.0;
  CHECK_THROWS_AS(smallest_eigs(op, eo), PreconditionError);
  SUBCASE("non-convergence carries the achieved residual") {
    EigOptions tight;
    tight.k = 4;
    tight.max_iter = 1;
    tight.ncv = 5;
    tight.tol = 1e-15;
    const AssembledOperator big = laplacian_1d(400);
    try {
      smallest_eigs(big, tight);
      CHECK(true);  // converging in one restart is allowed
    } catch (const ConvergenceError& e) {
      CHECK(e.achieved() > 0.0);
    }
  }
}

}
