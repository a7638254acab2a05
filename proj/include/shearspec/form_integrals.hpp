#pragma once

#include <optional>
#include <utility>

#include "shearspec/geometry.hpp"
#include "shearspec/test_functions.hpp"

namespace shearspec {

/// Tensor Gauss rule: composite in s (split at every break of psi and eps),
/// plain composite in t.
struct QuadOptions {
  int s_order = 20;
  int s_subpanels = 4;
  int t_order = 20;
  int t_subpanels = 2;
};

/// Integrals of a smooth test function psi over its support in R x (0, d).
/// With R = d_t psi - (chi_1'/chi_1) psi = chi_1 d_t(psi / chi_1):
///   h           ||d_s psi - f' d_t psi||^2 + ||d_t psi||^2
///   shear_sq    ||d_s psi - eps d_t psi - beta R||^2
///   transverse  ||R||^2
///   potential   int beta eps (E_1 + (chi_1'/chi_1)^2) psi^2
struct FormIntegrals {
  double h = 0.0;
  double norm2 = 0.0;
  double shear_sq = 0.0;
  double transverse = 0.0;
  double potential = 0.0;
  double inv_1ps2 = 0.0;       // int psi^2 / (1 + s^2)
  double inv_dist2 = 0.0;      // int psi^2 / (s - s0)^2, when s0 is given
  double norm2_interval = 0.0; // int_{I x (0,d)} psi^2, when I is given
};

FormIntegrals form_integrals(const ShearProfile& profile, double d, const TestFunction& psi,
                             const QuadOptions& quad = {},
                             std::optional<double> s0 = std::nullopt,
                             std::optional<std::pair<double, double>> interval = std::nullopt);

}  // namespace shearspec
