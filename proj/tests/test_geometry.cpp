#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shearspec/deficit.hpp"
#include "shearspec/error.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/quadrature.hpp"

using namespace shearspec;
using std::numbers::pi;

TEST_SUITE("geometry") {

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  for (int order : {7, 10, 15, 20, 25, 30}) {
    const auto& rule = gauss_legendre(order);
    CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    // x^(2 order - 2) integrates to 2 / (2 order - 1) on [-1, 1]
    double s = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights(i) * std::pow(rule.nodes(i), 2 * order - 2);
    CHECK(s == doctest::Approx(2.0 / (2 * order - 1)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_legendre(8), PreconditionError);
}

TEST_CASE("composite and adaptive quadrature") {
  const auto rule = composite_rule(0.0, pi, {1.0, 2.0}, 10, 2);
  CHECK(integrate([](double x) { return std::sin(x); }, rule) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("deficit terms") {
  SUBCASE("raised cosine: plateau, tapers and integral a (hi - lo - w)") {
    const auto t = DeficitTerm::raised_cosine(-0.5, 0.0, 1.0, 0.1);
    CHECK(t.value(0.5) == -0.5);
    CHECK(t.value(0.05) == doctest::Approx(-0.25));
    CHECK(t.value(-0.1) == 0.0);
    CHECK(t.value(1.1) == 0.0);
    const ShearProfile p = ShearProfile::bump(0.0, Deficit{t});
    CHECK(eval_f(p, 2.0) == doctest::Approx(-0.5 * 0.9).epsilon(1e-12));
  }
  SUBCASE("mollified indicator keeps its integral") {
    const auto t = DeficitTerm::indicator(2.0, 0.0, 1.0, 0.2);
    CHECK(t.support().first == doctest::Approx(-0.1));
    CHECK(t.value(0.0) == doctest::Approx(1.0));
    const ShearProfile p = ShearProfile::bump(0.0, Deficit{t});
    CHECK(eval_f(p, 3.0) - eval_f(p, -1.0) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("derivatives agree with central differences") {
    const Deficit eps{DeficitTerm::raised_cosine(0.7, -1.0, 1.0, 0.4),
                      DeficitTerm::indicator(-0.3, 2.0, 3.0, 0.5)};
    for (double s : {-0.9, -0.7, 0.65, 1.85, 2.1, 2.95}) {
      const double h = 1e-6;
      const double fd = (eps.value(s + h) - eps.value(s - h)) / (2 * h);
      CHECK(eps.derivative(s) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  SUBCASE("tabulated") {
    const auto t = DeficitTerm::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    CHECK(t.value(0.5) == doctest::Approx(0.5));
    CHECK(*t.closed_form_integral(0.0, 2.0) == doctest::Approx(1.0));
    CHECK(t.differentiable());
    CHECK_THROWS_AS(DeficitTerm::tabulated({0.0, 0.0}, {1.0, 1.0}), PreconditionError);
  }
  CHECK_THROWS_AS(DeficitTerm::raised_cosine(1.0, 0.0, 1.0, 0.7), PreconditionError);
  CHECK_THROWS_AS(DeficitTerm::gaussian(1.0, 1.0, 0.0, 1.0), PreconditionError);
}

TEST_CASE("eval_fprime") {
  CHECK(eval_fprime(ShearProfile::constant(2.0), 5.0) == 2.0);
  const ShearProfile bump =
      ShearProfile::bump(1.0, Deficit{DeficitTerm::indicator(-0.5, 0.0, 1.0)});
  CHECK(eval_fprime(bump, 0.5) == 0.5);
  CHECK(eval_fprime(bump, 1.5) == 1.0);
  CHECK(eval_fprime(ShearProfile::linear_unbounded(), -3.0) == -3.0);
}

TEST_CASE("eval_f") {
  CHECK(eval_f(ShearProfile::constant(2.0), 3.0) == 6.0);
  const ShearProfile schema =
      ShearProfile::schema(-4.0, 1.0, Deficit{DeficitTerm::indicator(1.0, 0.0, 1.0)}, 1.0, 1.0);
  CHECK(eval_f(schema, 1.0) == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(eval_f(schema, 0.0) == 0.0);
  CHECK(eval_f(ShearProfile::linear_unbounded(), 4.0) == 8.0);
  const ShearProfile smooth =
      ShearProfile::bump(0.3, Deficit{DeficitTerm::gaussian(1.0, -2.0, 2.0, 0.5)});
  CHECK(eval_f(smooth, 0.0) == 0.0);
  // int_0^2 exp(-x^2/(2 * 0.25)) dx = 0.5 sqrt(pi/2) erf(2 sqrt 2)
  CHECK(eval_f(smooth, 2.0) ==
        doctest::Approx(0.6 + 0.5 * std::sqrt(pi / 2.0) * std::erf(2.0 * std::sqrt(2.0))).epsilon(1e-12));
  CHECK(eval_f(smooth, -2.0) == doctest::Approx(-eval_f(smooth, 2.0)).epsilon(1e-12));
}

TEST_CASE("profile invariants") {
  SUBCASE("f' -> beta outside the support") {
    const ShearProfile p =
        ShearProfile::bump(1.5, Deficit{DeficitTerm::raised_cosine(2.0, -3.0, 4.0, 1.0)});
    for (double s : {-40.0, 40.0, 4.0 + 1e-9, -3.0 - 1e-9}) CHECK(eval_fprime(p, s) == 1.5);
  }
  SUBCASE("schema bounds are enforced") {
    CHECK_THROWS_AS(
        ShearProfile::schema(-5, 1, Deficit{DeficitTerm::raised_cosine(1.0, 0.0, 1.0, 0.5)}, 0.5, 1.0),
        PreconditionError);
    CHECK_THROWS_AS(
        ShearProfile::schema(-5, 1, Deficit{DeficitTerm::indicator(1.0, 0.0, 2.0)}, 1.0, 1.0),
        PreconditionError);
  }
  SUBCASE("strip geometry validation") {
    const ShearProfile p = ShearProfile::bump(1.0, Deficit{DeficitTerm::indicator(1.0, 0.0, 3.0)});
    CHECK_THROWS_AS((StripGeometry{1.0, 2.0}.validate(p)), PreconditionError);
    CHECK_THROWS_AS((StripGeometry{0.0, 5.0}.validate(p)), PreconditionError);
    CHECK_NOTHROW((StripGeometry{1.0, 5.0}.validate(p)));
  }
}

TEST_CASE("schema_points") {
  const Deficit one{DeficitTerm::indicator(1.0, 0.0, 1.0)};
  const SchemaGeometry g = schema_points(-10.0, 1.0, one, 1.0, 1.0, 1.0);
  CHECK(g.x0 == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(g.O.isApprox(Eigen::Vector2d(0.0, 0.0)));
  CHECK(g.C.isApprox(Eigen::Vector2d(0.0, 1.0)));
  CHECK((g.A - Eigen::Vector2d(-0.5, 0.5)).norm() < 1e-14);
  // f(x0') = f(1) + d with f(x) = -9x on [0, 1]: x0' = 8/9
  CHECK(g.x0_prime == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  // A lies on y = beta x + d and OA is perpendicular to its direction
  CHECK(std::abs(g.A.y() - (g.A.x() + 1.0)) < 1e-12);
  CHECK(std::abs((g.A - g.O).dot(Eigen::Vector2d(1.0, 1.0))) < 1e-12);
  CHECK(std::abs((g.A_prime - g.O_prime).dot(Eigen::Vector2d(1.0, 1.0))) < 1e-12);
  CHECK(std::abs(eval_f(g.profile, g.x0) + 1.0) < 1e-10);
  CHECK(std::abs(eval_f(g.profile, g.x0_prime) - eval_f(g.profile, 1.0) - 1.0) < 1e-10);

  CHECK_THROWS_WITH_AS(schema_points(-2.0, 1.0, one, 1.0, 1.0, 1.0),
                       "schema decomposition undefined for this alpha", PreconditionError);
  CHECK_THROWS_AS(schema_points(3.0, 1.0, one, 1.0, 1.0, 1.0), PreconditionError);
}

TEST_CASE("ball_intersection_area") {
  std::mt19937_64 rng(42);
  SUBCASE("ball inside a straight strip") {
    const auto a = ball_intersection_area(ShearProfile::constant(0.0), 10.0, {0.0, 5.0}, 1.0, rng);
    CHECK(a.area == doctest::Approx(pi).epsilon(1e-12));
    CHECK(a.std_error == 0.0);
  }
  SUBCASE("half-covered ball") {
    const auto a = ball_intersection_area(ShearProfile::constant(0.0), 10.0, {0.0, 0.0}, 1.0, rng, 400000);
    CHECK(std::abs(a.area - pi / 2.0) < 3.0 * a.std_error + 1e-12);
  }
  SUBCASE("quasi-bounded strip far out") {
    const ShearProfile p = ShearProfile::linear_unbounded();
    const double x = 50.0;
    const auto a = ball_intersection_area(p, 1.0, {x, eval_f(p, x) + 0.5}, 1.0, rng, 200000);
    CHECK(a.area < 0.1);
  }
  SUBCASE("tiny ball") {
    const auto a = ball_intersection_area(ShearProfile::constant(0.0), 1.0, {0.0, 0.5}, 1e-9, rng, 1000);
    CHECK(a.area < 1e-15);
  }
  CHECK_THROWS_AS(ball_intersection_area(ShearProfile::constant(0.0), 1.0, {0.0, 0.5}, 0.0, rng),
                  PreconditionError);
}

TEST_CASE("transverse ground state") {
  const double d = 2.0;
  CHECK(transverse_energy(d) == doctest::Approx(pi * pi / 4.0));
  CHECK(std::abs(chi1(d, d)) < 1e-15);
  // normalisation: int_0^d chi1^2 = 1
  CHECK(integrate_adaptive([&](double t) { return chi1(t, d) * chi1(t, d); }, 0.0, d) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // -chi1'' = E1 chi1 at an interior point (second difference of chi1)
  const double t = 0.7, h = 1e-4;
  const double second = (chi1(t + h, d) - 2 * chi1(t, d) + chi1(t - h, d)) / (h * h);
  CHECK(-second == doctest::Approx(transverse_energy(d) * chi1(t, d)).epsilon(1e-6));
}

}
