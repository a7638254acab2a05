#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "shearspec/deficit.hpp"

namespace shearspec {

enum class ProfileKind { constant, bump, schema, linear_unbounded };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

/// The shear profile f' = beta + alpha * eps(s).
///
/// `alpha` is 1 except for schema profiles, where it is the strong-shearing
/// multiplier. The linear-unbounded profile is f'(s) = s (beta = +infinity);
/// its `beta` field is ignored.
struct ShearProfile {
  ProfileKind kind = ProfileKind::constant;
  double beta = 0.0;
  double alpha = 1.0;
  Deficit deficit;
  std::optional<std::pair<double, double>> bounds;

  static ShearProfile constant(double beta);
  static ShearProfile bump(double beta, Deficit deficit);
  /// Validates supp eps in [0, 1] and c1 <= eps <= c2 on [0, 1].
  static ShearProfile schema(double alpha, double beta, Deficit deficit,
                             double c1, double c2);
  static ShearProfile linear_unbounded();

  bool infinite_beta() const noexcept { return kind == ProfileKind::linear_unbounded; }

  /// eps(s) = f'(s) - beta (already multiplied by alpha).
  double epsilon(double s) const;
  double epsilon_derivative(double s) const;
  bool has_epsilon_derivative() const;

  std::optional<std::pair<double, double>> support() const;
  std::vector<double> knots() const;

  /// max |eps| by dense sampling of the support (0 when eps == 0).
  double sup_abs_epsilon(int samples = 4001) const;
};

double eval_fprime(const ShearProfile& profile, double s);

/// f(s) = int_0^s f'(u) du (normalisation f(0) = 0).
double eval_f(const ShearProfile& profile, double s, double rel_tol = 1e-12);

struct StripGeometry {
  double d = 1.0;
  double L = 1.0;

  /// Throws PreconditionError when d, L are not positive or when the
  /// truncation does not contain the deficit support.
  void validate(const ShearProfile& profile) const;
};

/// Vertices and roots of the subdomain decomposition for the piecewise
/// strong-shearing profile (beta > 0, alpha < 0).
struct SchemaGeometry {
  double alpha = 0.0;
  double beta = 0.0;
  double d = 1.0;
  ShearProfile profile;
  Eigen::Vector2d O, A, C, B;
  Eigen::Vector2d O_prime, A_prime, C_prime, B_prime;
  double x0 = 0.0;
  double x0_prime = 0.0;
};

/// Bisection tolerance for x0 and x0'.
inline constexpr double kSchemaRootTol = 1e-12;

SchemaGeometry schema_points(double alpha, double beta, const Deficit& eps,
                             double d, double c1, double c2);

struct AreaEstimate {
  double area = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Monte Carlo estimate of |B_radius(center) \cap Omega| using uniform
/// samples in the disc drawn from `rng`.
AreaEstimate ball_intersection_area(const ShearProfile& profile, double d,
                                    const Eigen::Vector2d& center, double radius,
                                    std::mt19937_64& rng,
                                    std::int64_t samples = 1'000'000);

/// chi_1(t) = sqrt(2/d) sin(pi t / d) and its derivative; E_1 = (pi/d)^2.
double transverse_energy(double d);
double chi1(double t, double d);
double chi1_derivative(double t, double d);

}  // namespace shearspec
