#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shearspec/form_integrals.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/test_functions.hpp"

namespace shearspec {

enum class Condition { i, ii };

struct GapSample {
  double n = 0.0;
  double delta = 0.0;
  double gap = 0.0;
};

/// h_1[psi] = h[psi] - E_1(beta) ||psi||^2 for a test function psi; the
/// verdict is gap < 0.
struct VariationalCertificate {
  Condition condition = Condition::i;
  double n = 0.0;
  double rayleigh_gap = 0.0;
  bool verdict = false;
  /// Condition (i): E_1 int (eps^2 + 2 beta eps), the n -> infinity limit.
  double limit = 0.0;
  /// int (eps^2 + 2 beta eps) ds.
  double shear_integral = 0.0;
  // Condition (ii) only.
  double delta = 0.0;
  std::string xi_label;
  double functional_F = 0.0;
  std::vector<double> family_F;  // F for each canonical xi tried
  double h1_phi = 0.0;           // h_1[xi(s) t chi_1(t)]
  std::vector<GapSample> scanned;
};

/// int (eps^2 + 2 beta eps) ds by composite Gauss split at the knots.
double shear_integral(const ShearProfile& profile);

/// gap = 2/n + E_1 int (eps^2 + 2 beta eps) phi_n^2 with phi_n = 1 on [-n, n].
VariationalCertificate rayleigh_condition_i(const ShearProfile& profile, double d, double n);

/// F(xi) = 1/2 int [-eps' + E_1 d (eps^2 + 2 beta eps)] xi ds.
double functional_F(const ShearProfile& profile, double d, const Function1D& xi);

/// Gaussians centred on five equispaced points of the deficit support,
/// sigma = (half-width of the support) / 4.
std::vector<Function1D> canonical_xi_family(const ShearProfile& profile);

/// psi_{n,delta} = phi_n(s) chi_1(t) + delta xi(s) t chi_1(t).
TestFunction perturbed_test_function(double d, double n, double delta, const Function1D& xi);

struct ConditionIIOptions {
  std::optional<Function1D> xi;         // tried first when given
  std::vector<double> n_grid;           // empty: support bound times 2^k, k = 0..10
  std::vector<double> delta_grid;       // magnitudes; empty: 2^-k, k = 0..12
  double premise_tol = 1e-10;
  double F_tol = 1e-9;
  QuadOptions quad;
};

VariationalCertificate certify_condition_ii(const ShearProfile& profile, double d,
                                            const ConditionIIOptions& options = {});

/// Two raised-cosine bumps, level -1 on [0, 1] and level `level` on [1, 2],
/// with the given taper.
ShearProfile two_bump_profile(double beta, double level, double taper);

/// Secant iteration for the positive second level making
/// int (eps^2 + 2 beta eps) vanish.
ShearProfile calibrated_two_bump_profile(double beta, double taper = 0.25);

/// eps_c(s) = 2 beta / (c exp(-2 E_1 d beta s) - 1) multiplied by a
/// smoothstep window equal to 1 on [lo + ramp, hi - ramp].
DeficitTerm obstruction_term(double beta, double d, double c, double lo, double hi, double ramp);

}  // namespace shearspec
