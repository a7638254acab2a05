#include "shearspec/spectra.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "shearspec/assembly.hpp"
#include "shearspec/error.hpp"
#include "shearspec/parallel.hpp"

namespace shearspec {

std::optional<double> essential_threshold(double beta, double d) {
  if (!(d > 0.0)) throw PreconditionError("degenerate geometry: d must be positive");
  if (std::isinf(beta)) return std::nullopt;
  if (std::isnan(beta)) throw PreconditionError("beta is NaN");
  return (1.0 + beta * beta) * transverse_energy(d);
}

std::optional<double> essential_threshold(const ShearProfile& profile, double d) {
  if (profile.infinite_beta()) return std::nullopt;
  return essential_threshold(profile.beta, d);
}

double analytic_band(double beta, double d, int n, double xi) {
  const double g = 1.0 + beta * beta;
  return g * n * n * transverse_energy(d) + xi * xi / g;
}

double DispersionCurve::max_relative_error() const {
  return ((numeric - analytic).cwiseAbs().array() / analytic.array().abs()).maxCoeff();
}

DispersionCurve dispersion_curve(double beta, double d, const std::vector<double>& xi_grid,
                                 int m_bands, int n_t, const EigOptions& base, int jobs) {
  if (!std::isfinite(beta)) throw PreconditionError("dispersion requires a finite beta");
  if (m_bands < 1) throw PreconditionError("m_bands must be >= 1");
  if (xi_grid.empty()) throw PreconditionError("empty xi grid");
  DispersionCurve curve;
  curve.beta = beta;
  curve.d = d;
  curve.n_t = n_t;
  curve.xi_grid = xi_grid;
  curve.threshold = *essential_threshold(beta, d);
  const auto rows = static_cast<Eigen::Index>(xi_grid.size());
  curve.analytic.resize(rows, m_bands);
  curve.numeric.resize(rows, m_bands);
  parallel_for(xi_grid.size(), jobs, [&](std::size_t i) {
    const double xi = xi_grid[i];
    const AssembledOperator op = assemble_tbeta_1d(d, beta, xi, n_t);
    EigOptions opts = base;
    opts.k = m_bands;
    if (!opts.shift) opts.shift = 0.9 * curve.threshold;
    const EigResult r = smallest_eigs(op, opts);
    for (int n = 0; n < m_bands; ++n) {
      curve.analytic(static_cast<Eigen::Index>(i), n) = analytic_band(beta, d, n + 1, xi);
      curve.numeric(static_cast<Eigen::Index>(i), n) = r.values(n);
    }
  });
  Eigen::Index arg = 0;
  curve.band1_min = curve.numeric.col(0).minCoeff(&arg);
  curve.band1_argmin = xi_grid[static_cast<std::size_t>(arg)];
  return curve;
}

void write_dispersion_csv(std::ostream& out, const DispersionCurve& curve) {
  out.precision(17);
  out << "xi,band_index,analytic,numeric\n";
  for (std::size_t i = 0; i < curve.xi_grid.size(); ++i)
    for (int n = 0; n < curve.bands(); ++n)
      out << curve.xi_grid[i] << ',' << n + 1 << ','
          << curve.analytic(static_cast<Eigen::Index>(i), n) << ','
          << curve.numeric(static_cast<Eigen::Index>(i), n) << '\n';
}

std::vector<double> observed_rates(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw PreconditionError("observed_rates: size mismatch");
  std::vector<double> rates;
  for (std::size_t i = 1; i < h.size(); ++i)
    rates.push_back(std::log(err[i - 1] / err[i]) / std::log(h[i - 1] / h[i]));
  return rates;
}

double threshold_margin(double threshold, double tol) {
  return std::max(10.0 * tol, threshold * 1e-6);
}

SpectrumReport truncated_spectrum(const ShearProfile& profile, const StripGeometry& geometry,
                                  int n_s, int n_t, BoundaryTag end_bc, const EigOptions& opts) {
  geometry.validate(profile);
  SpectrumReport report;
  report.profile = profile;
  report.geometry = geometry;
  report.n_s = n_s;
  report.n_t = n_t;
  report.end_bc = end_bc;
  report.threshold = essential_threshold(profile, geometry.d);

  const StructuredMesh mesh = build_mesh(geometry, n_s, n_t, end_bc);
  const AssembledOperator op = assemble_h(mesh, profile);
  EigOptions o = opts;
  if (!o.shift) o.shift = 0.99 * report.threshold.value_or(transverse_energy(geometry.d));
  report.eig = smallest_eigs(op, o);
  if (report.threshold) {
    report.margin = threshold_margin(*report.threshold, o.tol);
    report.count_below_threshold = static_cast<int>(
        count_below(op.stiffness, op.mass, *report.threshold - report.margin));
  } else {
    report.count_below_threshold = static_cast<int>(report.eig.values.size());
  }
  return report;
}

ConvergenceTable convergence_study(const ShearProfile& profile, double d,
                                   const std::vector<Rung>& ladder, BoundaryTag end_bc,
                                   const EigOptions& opts, int jobs) {
  if (ladder.empty()) throw PreconditionError("empty refinement ladder");
  ConvergenceTable table;
  table.rungs = ladder;
  table.threshold = essential_threshold(profile, d);
  table.lambda1.assign(ladder.size(), 0.0);
  parallel_for(ladder.size(), jobs, [&](std::size_t i) {
    EigOptions o = opts;
    o.k = 1;
    const SpectrumReport r =
        truncated_spectrum(profile, {d, ladder[i].L}, ladder[i].n_s, ladder[i].n_t, end_bc, o);
    table.lambda1[i] = r.eig.values(0);
  });
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (table.lambda1[i] > table.lambda1[i - 1] + 1e-12 * std::abs(table.lambda1[i - 1]))
      table.nonincreasing = false;
  if (ladder.size() >= 2) {
    const std::size_t j = ladder.size() - 1;
    const double l1 = ladder[j - 1].L * ladder[j - 1].L;
    const double l2 = ladder[j].L * ladder[j].L;
    table.extrapolated = (l2 * table.lambda1[j] - l1 * table.lambda1[j - 1]) / (l2 - l1);
    table.last_difference = std::abs(table.lambda1[j] - table.lambda1[j - 1]);
  } else {
    table.extrapolated = std::numeric_limits<double>::quiet_NaN();
  }
  return table;
}

}  // namespace shearspec
