#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "shearspec/eigensolve.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/mesh.hpp"

namespace shearspec {

/// (1 + beta^2)(pi/d)^2, or std::nullopt ("empty") for infinite beta.
std::optional<double> essential_threshold(double beta, double d);
std::optional<double> essential_threshold(const ShearProfile& profile, double d);

/// (1 + beta^2) n^2 (pi/d)^2 + xi^2 / (1 + beta^2).
double analytic_band(double beta, double d, int n, double xi);

struct DispersionCurve {
  double beta = 0.0;
  double d = 1.0;
  int n_t = 0;
  std::vector<double> xi_grid;
  Eigen::MatrixXd analytic;  // rows = xi, cols = band
  Eigen::MatrixXd numeric;
  double band1_min = 0.0;    // numeric
  double band1_argmin = 0.0;
  double threshold = 0.0;    // E_1(beta)

  int bands() const { return static_cast<int>(analytic.cols()); }
  /// max |numeric - analytic| / analytic over the whole table.
  double max_relative_error() const;
};

/// Solves the gauge-form fiber problem at every xi (independent jobs,
/// merged by grid index).
DispersionCurve dispersion_curve(double beta, double d, const std::vector<double>& xi_grid,
                                 int m_bands, int n_t, const EigOptions& base = {},
                                 int jobs = 1);

/// CSV with header "xi,band_index,analytic,numeric"; band_index starts at 1.
void write_dispersion_csv(std::ostream& out, const DispersionCurve& curve);

/// Observed order log(e1/e2)/log(h1/h2) of consecutive rungs.
std::vector<double> observed_rates(const std::vector<double>& h, const std::vector<double>& err);

struct SpectrumReport {
  ShearProfile profile;
  StripGeometry geometry;
  int n_s = 0;
  int n_t = 0;
  BoundaryTag end_bc = BoundaryTag::dirichlet;
  EigResult eig;
  std::optional<double> threshold;  // nullopt: empty essential spectrum
  double margin = 0.0;
  /// Eigenvalues below threshold - margin, from the inertia of the shifted
  /// matrix; every computed eigenvalue when the threshold is empty.
  int count_below_threshold = 0;
  std::vector<double> ladder;
};

/// Threshold margin max(10 tol, threshold * 1e-6).
double threshold_margin(double threshold, double tol);

/// Assembles h on (-L, L) x (0, d) and solves for the k smallest
/// eigenvalues. An unset shift defaults to 0.99 E_1(beta).
SpectrumReport truncated_spectrum(const ShearProfile& profile, const StripGeometry& geometry,
                                  int n_s, int n_t, BoundaryTag end_bc, const EigOptions& opts);

struct Rung {
  double L = 1.0;
  int n_s = 2;
  int n_t = 2;
};

struct ConvergenceTable {
  std::vector<Rung> rungs;
  std::vector<double> lambda1;
  bool nonincreasing = true;
  /// Two-rung extrapolation in 1/L^2 from the last two rungs (NaN for one rung).
  double extrapolated = 0.0;
  /// |lambda1(last) - lambda1(second to last)|.
  double last_difference = 0.0;
  std::optional<double> threshold;
};

ConvergenceTable convergence_study(const ShearProfile& profile, double d,
                                   const std::vector<Rung>& ladder, BoundaryTag end_bc,
                                   const EigOptions& opts, int jobs = 1);

}  // namespace shearspec
