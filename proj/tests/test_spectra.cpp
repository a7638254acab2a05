#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "shearspec/assembly.hpp"
#include "shearspec/eigensolve.hpp"
#include "shearspec/error.hpp"
#include "shearspec/mesh.hpp"
#include "shearspec/spectra.hpp"

using namespace shearspec;
using std::numbers::pi;

namespace {

std::vector<double> symmetric_grid(double half, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) g.push_back(-half + 2.0 * half * i / (points - 1));
  return g;
}

ShearProfile cosine_bump(double beta, double amplitude) {
  return ShearProfile::bump(beta, Deficit{DeficitTerm::raised_cosine(amplitude, 0.0, 1.0, 0.5)});
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("essential_threshold") {
  CHECK(*essential_threshold(0.0, pi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*essential_threshold(2.0, 1.0) == doctest::Approx(5.0 * pi * pi).epsilon(1e-15));
  CHECK_FALSE(essential_threshold(std::numeric_limits<double>::infinity(), 1.0).has_value());
  CHECK_FALSE(essential_threshold(ShearProfile::linear_unbounded(), 1.0).has_value());
  CHECK(*essential_threshold(cosine_bump(-1.0, 0.3), pi) == doctest::Approx(2.0));
  CHECK_THROWS_AS(essential_threshold(1.0, 0.0), PreconditionError);
}

TEST_CASE("analytic bands") {
  CHECK(analytic_band(0.0, pi, 2, 3.0) == doctest::Approx(13.0).epsilon(1e-15));
  CHECK(analytic_band(1.0, pi, 1, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(analytic_band(1.0, 1.0, 3, 2.0) == doctest::Approx(18.0 * pi * pi + 2.0).epsilon(1e-15));
}

TEST_CASE("dispersion curve") {
  const auto grid = symmetric_grid(2.0, 9);
  const DispersionCurve c = dispersion_curve(1.0, pi, grid, 3, 200);
  CHECK(c.numeric(4, 0) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(c.band1_argmin == 0.0);
  CHECK(c.band1_min == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(c.threshold == doctest::Approx(2.0).epsilon(1e-15));
  // leading P1 term for band 3: (3 pi h / d)^2 / 12
  CHECK(c.max_relative_error() <= 1.05 * std::pow(3.0 * pi / 200.0, 2) / 12.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // evenness in xi
    for (int b = 0; b < 3; ++b)
      CHECK(std::abs(c.numeric(i, b) - c.numeric(grid.size() - 1 - i, b)) <= 1e-9 * c.numeric(i, b));
    // conforming discretisation: numeric bands lie above the analytic ones
    CHECK(c.numeric(i, 0) >= c.analytic(i, 0));
  }

  SUBCASE("analytic band 1 is minimal at xi = 0 on every symmetric grid") {
    for (int points : {3, 5, 11, 21}) {
      const DispersionCurve a = dispersion_curve(0.5, 2.0, symmetric_grid(3.0, points), 1, 20);
      Eigen::Index arg;
      a.analytic.col(0).minCoeff(&arg);
      CHECK(a.xi_grid[arg] == 0.0);
      CHECK(a.analytic(arg, 0) == doctest::Approx(*essential_threshold(0.5, 2.0)).epsilon(1e-15));
    }
  }

  SUBCASE("second-order convergence in n_t") {
    std::vector<double> h, err;
    for (int n_t : {25, 50, 100}) {
      const DispersionCurve r = dispersion_curve(2.0, 1.0, {-1.5, 0.0, 2.5}, 3, n_t);
      h.push_back(1.0 / n_t);
      err.push_back((r.numeric - r.analytic).cwiseAbs().maxCoeff());
    }
    for (double rate : observed_rates(h, err)) CHECK(rate >= 1.8);
  }

  SUBCASE("parallel jobs merge by grid index") {
    const DispersionCurve p = dispersion_curve(1.0, pi, grid, 3, 200, {}, 3);
    CHECK((p.numeric - c.numeric).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("csv") {
    std::ostringstream out;
    write_dispersion_csv(out, dispersion_curve(1.0, pi, {0.0}, 2, 50));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "xi,band_index,analytic,numeric");
    std::getline(in, line);
    CHECK(line.rfind("0,1,2,", 0) == 0);
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2);
  }

  CHECK_THROWS_AS(dispersion_curve(std::numeric_limits<double>::infinity(), 1.0, grid, 1, 10),
                  PreconditionError);
  CHECK_THROWS_AS(dispersion_curve(1.0, 1.0, {}, 1, 10), PreconditionError);
}

TEST_CASE("observed_rates") {
  const auto r = observed_rates({0.1, 0.05, 0.025}, {1e-2, 2.5e-3, 6.25e-4});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.0));
  CHECK(r[1] == doctest::Approx(2.0));
}

TEST_CASE("truncated_spectrum") {
  EigOptions eo;
  eo.k = 3;

  SUBCASE("straight strip has nothing below the threshold") {
    const SpectrumReport r =
        truncated_spectrum(ShearProfile::constant(0.0), StripGeometry{pi, 10.0}, 160, 16, BoundaryTag::dirichlet, eo);
    CHECK(r.count_below_threshold == 0);
    CHECK(*r.threshold == doctest::Approx(1.0));
    CHECK(r.margin == doctest::Approx(threshold_margin(1.0, eo.tol)));
    CHECK(r.eig.values(0) > 1.0);
  }

  SUBCASE("attractive bump binds") {
    const ShearProfile p = cosine_bump(1.0, -0.5);
    const SpectrumReport r = truncated_spectrum(p, StripGeometry{pi, 12.0}, 480, 24, BoundaryTag::dirichlet, eo);
    CHECK(r.count_below_threshold >= 1);
    CHECK(r.eig.values(0) < 2.0 - r.margin);

    // coarse mesh, cross-checked by the dense path
    const SpectrumReport coarse = truncated_spectrum(p, StripGeometry{pi, 12.0}, 96, 12, BoundaryTag::dirichlet, eo);
    const AssembledOperator op = assemble_h(build_mesh(StripGeometry{pi, 12.0}, 96, 12, BoundaryTag::dirichlet), p);
    REQUIRE(op.size() <= kDenseOracleMaxDim);
    const Eigen::VectorXd all = dense_oracle(op.stiffness, op.mass);
    CHECK(std::abs(coarse.eig.values(0) - all(0)) <= 1e-10 * all(0));
    CHECK(coarse.eig.values(0) >= r.eig.values(0) - 1e-9);
  }

  SUBCASE("repulsive bump does not bind") {
    const SpectrumReport r =
        truncated_spectrum(cosine_bump(1.0, 0.5), StripGeometry{pi, 12.0}, 480, 24, BoundaryTag::dirichlet, eo);
    CHECK(r.count_below_threshold == 0);
    CHECK(r.eig.values(0) >= 2.0 - 1e-9);
  }

  SUBCASE("linear-unbounded profile reports every computed eigenvalue") {
    const SpectrumReport r = truncated_spectrum(ShearProfile::linear_unbounded(), StripGeometry{1.0, 4.0}, 160,
                                                20, BoundaryTag::dirichlet, eo);
    CHECK_FALSE(r.threshold.has_value());
    CHECK(r.count_below_threshold == 3);
  }

  SUBCASE("the deficit support must fit in the truncation") {
    const ShearProfile wide = ShearProfile::bump(1.0, Deficit{DeficitTerm::indicator(-0.5, -5.0, 5.0)});
    CHECK_THROWS_AS(truncated_spectrum(wide, StripGeometry{1.0, 4.0}, 40, 8, BoundaryTag::dirichlet, eo),
                    PreconditionError);
  }
}

TEST_CASE("Dirichlet truncation is monotone under nesting") {
  const ShearProfile p = ShearProfile::constant(1.0);
  SUBCASE("longer strips at equal mesh size") {
    double prev = std::numeric_limits<double>::infinity();
    for (double L : {2.0, 4.0, 8.0}) {
      const SpectrumReport r = truncated_spectrum(p, StripGeometry{pi, L}, static_cast<int>(8 * L), 12,
                                                  BoundaryTag::dirichlet, EigOptions{});
      CHECK(r.eig.values(0) <= prev + 1e-12);
      prev = r.eig.values(0);
    }
  }
  SUBCASE("uniform refinement at fixed length") {
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {4, 8, 16}) {
      const SpectrumReport r =
          truncated_spectrum(p, StripGeometry{pi, 3.0}, 4 * n, n, BoundaryTag::dirichlet, EigOptions{});
      CHECK(r.eig.values(0) <= prev + 1e-12);
      prev = r.eig.values(0);
    }
  }
}

TEST_CASE("convergence_study") {
  SUBCASE("straight strip approaches 1") {
    const ConvergenceTable t = convergence_study(ShearProfile::constant(0.0), pi,
                                                 {{10.0, 100, 40}, {20.0, 200, 40}}, BoundaryTag::dirichlet, {});
    CHECK(t.nonincreasing);
    CHECK(t.lambda1[0] > t.lambda1[1]);
    CHECK(t.lambda1[1] > 1.0);
    CHECK(std::abs(t.extrapolated - 1.0) < 1e-3);
    CHECK(t.last_difference == doctest::Approx(t.lambda1[0] - t.lambda1[1]));
  }
  SUBCASE("constant shear extrapolates to E1(beta)") {
    const ConvergenceTable t = convergence_study(ShearProfile::constant(1.0), pi,
                                                 {{5.0, 100, 30}, {10.0, 200, 30}}, BoundaryTag::dirichlet, {}, 2);
    CHECK(t.nonincreasing);
    CHECK(std::abs(t.extrapolated - 2.0) < 1e-2);
    CHECK(*t.threshold == doctest::Approx(2.0));
  }
  SUBCASE("quasi-bounded strip stabilises in L") {
    const ConvergenceTable t = convergence_study(ShearProfile::linear_unbounded(), 1.0,
                                                 {{4.0, 160, 20}, {8.0, 320, 20}}, BoundaryTag::dirichlet, {});
    CHECK(t.last_difference < 1e-6);
    CHECK_FALSE(t.threshold.has_value());
  }
  SUBCASE("a single rung has no extrapolation") {
    const ConvergenceTable t =
        convergence_study(ShearProfile::constant(0.0), 1.0, {{2.0, 8, 4}}, BoundaryTag::dirichlet, {});
    CHECK(std::isnan(t.extrapolated));
  }
  CHECK_THROWS_AS(convergence_study(ShearProfile::constant(0.0), 1.0, {}, BoundaryTag::dirichlet, {}),
                  PreconditionError);
}

}
