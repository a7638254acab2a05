#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shearspec/eigensolve.hpp"
#include "shearspec/form_integrals.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/test_functions.hpp"

namespace shearspec {

struct LambdaIResult {
  double value = 0.0;         // Richardson value (4 fine - coarse) / 3
  double coarse = 0.0;        // (n_s, n_t)
  double fine = 0.0;          // (2 n_s, 2 n_t)
  std::pair<double, double> interval;
  int n_s = 0;
  int n_t = 0;
};

/// Lowest eigenvalue of q_I on I x (0, d) at two resolutions.
LambdaIResult lambda_I(const ShearProfile& profile, double d, std::pair<double, double> interval,
                       int n_s, int n_t, const EigOptions& base = {});

/// Cutoff eta: 0 on |s - s0| <= b/2, quintic smoothstep up to 1 at
/// |s - s0| = b; sup |eta'| = 15 / (4 b).
double cutoff_eta(double s, double s0, double b);
double cutoff_eta_derivative(double s, double s0, double b);
double cutoff_eta_sup(double b);

/// inf over s of (1 + s^2) / (1 + (s - s0)^2), in closed form.
double hardy_inf_ratio(double s0);

struct HardyCertificate {
  double beta = 0.0;
  double d = 1.0;
  double s0 = 0.0;
  double b = 1.0;
  LambdaIResult lambda;
  double eta_sup = 0.0;
  double c_prime = 0.0;
  double c = 0.0;
  double delta_star = 0.0;
  double inf_ratio = 1.0;
};

/// c' = l / (16 (1 + beta^2)(l + eta_sup^2) + 2), c = c' inf_ratio(s0) and
/// delta* = l / (l + eta_sup^2 + 1 / (8 (1 + beta^2))) for a given l = lambda_I.
HardyCertificate hardy_constants_from_lambda(double beta, double d, double s0, double b,
                                             const LambdaIResult& lambda);

/// Checks repulsiveness (beta eps >= 0 at dense samples), computes lambda_I
/// on I = (s0 - b, s0 + b) and the constants.
HardyCertificate hardy_constants(const ShearProfile& profile, double d, double s0, double b,
                                 int n_s = 40, int n_t = 40);

struct VerifyHardyOptions {
  double tol = 1e-7;
  double c_scale = 1.0;   // multiplies certificate.c (falsification probes)
  double delta = 0.0;     // weight of the local Hardy term
  std::uint64_t seed = 1;
  /// Strip for the spectral check.
  double L = 20.0;
  int n_s = 400;
  int n_t = 24;
  QuadOptions quad;
};

struct VerifyHardyReport {
  double c_used = 0.0;
  int trials = 0;
  double min_margin_a = 0.0;  // min over trials of the normalised margin
  bool pass_a = false;
  double lambda_min_b = 0.0;
  bool pass_b = false;
  double tol = 0.0;
  double delta = 0.0;
  /// Description of the worst trial function (coefficient and factor labels).
  std::vector<std::string> witness;
};

VerifyHardyReport verify_hardy(const HardyCertificate& certificate, const ShearProfile& profile,
                               int trials, const VerifyHardyOptions& options = {});

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// Both sides of h[psi] - E_1(beta)||psi||^2 = shear_sq + transverse + potential.
IdentityResidual ground_state_identity(const ShearProfile& profile, double d,
                                       const TestFunction& psi, const QuadOptions& quad = {});

struct OneDHardyMargin {
  double lhs = 0.0;       // shear_sq + transverse
  double weighted = 0.0;  // int psi^2 / (s - s0)^2
  double margin = 0.0;    // lhs - weighted / (4 (1 + beta^2))
};

/// Requires every s-factor of psi to vanish on a neighbourhood of s0.
OneDHardyMargin one_d_hardy_check(const ShearProfile& profile, double d, double s0,
                                  const TestFunction& psi, const QuadOptions& quad = {});

}  // namespace shearspec
