#include "shearspec/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shearspec/error.hpp"
#include "shearspec/quadrature.hpp"

namespace shearspec {

namespace {

void require_finite_beta(const ShearProfile& profile) {
  if (profile.infinite_beta()) throw PreconditionError("variational certificates need a finite beta");
}

CompositeRule support_rule(const ShearProfile& profile, std::vector<double> extra = {}) {
  const auto supp = profile.support();
  std::vector<double> breaks = profile.knots();
  breaks.insert(breaks.end(), extra.begin(), extra.end());
  return composite_rule(supp->first, supp->second, breaks, 20, 8);
}

}  // namespace

double shear_integral(const ShearProfile& profile) {
  require_finite_beta(profile);
  if (!profile.support()) return 0.0;
  const double beta = profile.beta;
  return integrate(
      [&](double s) {
        const double e = profile.epsilon(s);
        return e * e + 2.0 * beta * e;
      },
      support_rule(profile));
}

VariationalCertificate rayleigh_condition_i(const ShearProfile& profile, double d, double n) {
  require_finite_beta(profile);
  if (!(n > 0.0)) throw PreconditionError("plateau half-width n must be positive");
  if (auto supp = profile.support(); supp && (supp->first < -n || supp->second > n))
    throw PreconditionError("deficit support must lie in [-n, n]");
  VariationalCertificate cert;
  cert.condition = Condition::i;
  cert.n = n;
  cert.shear_integral = shear_integral(profile);
  cert.limit = transverse_energy(d) * cert.shear_integral;
  cert.rayleigh_gap = 2.0 / n + cert.limit;
  cert.verdict = cert.rayleigh_gap < 0.0;
  return cert;
}

double functional_F(const ShearProfile& profile, double d, const Function1D& xi) {
  require_finite_beta(profile);
  if (!profile.support()) return 0.0;
  if (!profile.has_epsilon_derivative())
    throw PreconditionError("condition (ii) requires the derivative of eps");
  const double beta = profile.beta;
  const double k = transverse_energy(d) * d;
  std::vector<double> extra = xi.breaks;
  return 0.5 * integrate(
                   [&](double s) {
                     const double e = profile.epsilon(s);
                     return (-profile.epsilon_derivative(s) + k * (e * e + 2.0 * beta * e)) *
                            xi.f(s);
                   },
                   support_rule(profile, extra));
}

std::vector<Function1D> canonical_xi_family(const ShearProfile& profile) {
  const auto supp = profile.support();
  if (!supp) return {};
  const double b = 0.5 * (supp->second - supp->first);
  std::vector<Function1D> family;
  for (int i = 0; i < 5; ++i) {
    const double c = supp->first + (supp->second - supp->first) * i / 4.0;
    family.push_back(gaussian_window(c, b / 4.0));
  }
  return family;
}

TestFunction perturbed_test_function(double d, double n, double delta, const Function1D& xi) {
  TestFunction psi = separable(plateau(n), transverse_chi1(d));
  if (delta != 0.0) psi.terms.push_back({delta, xi, transverse_t_chi1(d)});
  return psi;
}

VariationalCertificate certify_condition_ii(const ShearProfile& profile, double d,
                                            const ConditionIIOptions& options) {
  require_finite_beta(profile);
  if (!profile.has_epsilon_derivative())
    throw PreconditionError("condition (ii) requires the derivative of eps");
  VariationalCertificate cert;
  cert.condition = Condition::ii;
  cert.shear_integral = shear_integral(profile);
  if (cert.shear_integral < -options.premise_tol)
    throw PreconditionError("int (eps^2 + 2 beta eps) < 0: use condition i");
  if (cert.shear_integral > options.premise_tol)
    throw PreconditionError("condition (ii) premise fails: int (eps^2 + 2 beta eps) > 0");

  std::optional<Function1D> xi;
  if (options.xi) {
    const double F = functional_F(profile, d, *options.xi);
    cert.family_F.push_back(F);
    if (std::abs(F) > options.F_tol) {
      xi = options.xi;
      cert.functional_F = F;
    }
  }
  if (!xi) {
    double best = 0.0;
    for (const auto& candidate : canonical_xi_family(profile)) {
      const double F = functional_F(profile, d, candidate);
      cert.family_F.push_back(F);
      if (std::abs(F) > std::abs(best)) {
        best = F;
        xi = candidate;
      }
    }
    if (!xi || std::abs(best) <= options.F_tol) throw Error("no admissible xi found");
    cert.functional_F = best;
  }
  cert.xi_label = xi->label;

  const double threshold = (1.0 + profile.beta * profile.beta) * transverse_energy(d);
  auto h1 = [&](const TestFunction& psi) {
    const FormIntegrals fi = form_integrals(profile, d, psi, options.quad);
    return fi.h - threshold * fi.norm2;
  };
  cert.h1_phi = h1(separable(*xi, transverse_t_chi1(d)));

  // phi_n must equal 1 on the supports of eps and xi.
  const auto supp = profile.support();
  const double reach = std::max({std::abs(supp->first), std::abs(supp->second),
                                 std::abs(xi->lo), std::abs(xi->hi)});
  std::vector<double> n_grid = options.n_grid;
  if (n_grid.empty())
    for (int k = 0; k <= 10; ++k) n_grid.push_back(reach * std::ldexp(1.0, k));
  std::vector<double> delta_grid = options.delta_grid;
  if (delta_grid.empty())
    for (int k = 0; k <= 12; ++k) delta_grid.push_back(std::ldexp(1.0, -k));
  const double sign = cert.functional_F > 0.0 ? -1.0 : 1.0;

  cert.rayleigh_gap = std::numeric_limits<double>::infinity();
  for (double n : n_grid) {
    if (n < reach) continue;
    for (double magnitude : delta_grid) {
      const double delta = sign * std::abs(magnitude);
      const double gap = h1(perturbed_test_function(d, n, delta, *xi));
      cert.scanned.push_back({n, delta, gap});
      if (gap < cert.rayleigh_gap || gap < 0.0) {
        cert.rayleigh_gap = gap;
        cert.n = n;
        cert.delta = delta;
      }
      if (gap < 0.0) {
        cert.verdict = true;
        return cert;
      }
    }
  }
  cert.verdict = false;
  return cert;
}

ShearProfile two_bump_profile(double beta, double level, double taper) {
  return ShearProfile::bump(beta, Deficit{DeficitTerm::raised_cosine(-1.0, 0.0, 1.0, taper),
                                          DeficitTerm::raised_cosine(level, 1.0, 2.0, taper)});
}

ShearProfile calibrated_two_bump_profile(double beta, double taper) {
  auto g = [&](double level) { return shear_integral(two_bump_profile(beta, level, taper)); };
  double x0 = std::numbers::sqrt2 - 1.0, x1 = 0.5;
  double g0 = g(x0), g1 = g(x1);
  for (int it = 0; it < 100 && std::abs(g1) > 1e-15; ++it) {
    if (g1 == g0) break;
    const double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
    x0 = x1;
    g0 = g1;
    x1 = x2;
    g1 = g(x1);
  }
  if (!(std::abs(g1) <= 1e-12) || !(x1 > 0.0))
    throw ConvergenceError("two-bump calibration did not converge", std::abs(g1));
  return two_bump_profile(beta, x1, taper);
}

DeficitTerm obstruction_term(double beta, double d, double c, double lo, double hi, double ramp) {
  if (!(hi - lo > 2.0 * ramp) || !(ramp > 0.0))
    throw PreconditionError("obstruction window too narrow for its ramps");
  const double k = 2.0 * transverse_energy(d) * d * beta;
  if (c > 0.0) {
    const double pole = std::log(c) / k;
    if (pole >= lo && pole <= hi) throw PreconditionError("obstruction window contains the pole of eps_c");
  }
  auto eps = [=](double s) { return 2.0 * beta / (c * std::exp(-k * s) - 1.0); };
  auto deps = [=](double s) {
    const double q = c * std::exp(-k * s) - 1.0;
    return 2.0 * beta * c * k * std::exp(-k * s) / (q * q);
  };
  auto window = [=](double s) {
    return smoothstep5((s - lo) / ramp) * smoothstep5((hi - s) / ramp);
  };
  auto dwindow = [=](double s) {
    return smoothstep5_derivative((s - lo) / ramp) / ramp * smoothstep5((hi - s) / ramp) -
           smoothstep5((s - lo) / ramp) * smoothstep5_derivative((hi - s) / ramp) / ramp;
  };
  return DeficitTerm::custom([=](double s) { return eps(s) * window(s); },
                             [=](double s) { return deps(s) * window(s) + eps(s) * dwindow(s); },
                             lo, hi, {lo, lo + ramp, hi - ramp, hi});
}

}  // namespace shearspec
