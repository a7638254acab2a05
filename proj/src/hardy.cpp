#include "shearspec/hardy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "shearspec/assembly.hpp"
#include "shearspec/error.hpp"
#include "shearspec/mesh.hpp"

namespace shearspec {

LambdaIResult lambda_I(const ShearProfile& profile, double d, std::pair<double, double> interval,
                       int n_s, int n_t, const EigOptions& base) {
  if (!(interval.second > interval.first)) throw PreconditionError("interval I must be bounded and nonempty");
  const std::array<BoundaryTag, 4> natural{BoundaryTag::neumann, BoundaryTag::neumann,
                                           BoundaryTag::neumann, BoundaryTag::neumann};
  auto solve = [&](int ns, int nt) {
    const StructuredMesh mesh =
        build_rectangle_mesh(interval.first, interval.second, 0.0, d, ns, nt, natural);
    const AssembledOperator op = assemble_qI(mesh, profile, d);
    EigOptions opts = base;
    opts.k = 1;
    // q_I is only semidefinite; keep the shift strictly below 0.
    if (!opts.shift) opts.shift = -1.0;
    return std::max(0.0, smallest_eigs(op, opts).values(0));
  };
  LambdaIResult out;
  out.interval = interval;
  out.n_s = n_s;
  out.n_t = n_t;
  out.coarse = solve(n_s, n_t);
  out.fine = solve(2 * n_s, 2 * n_t);
  out.value = std::max(0.0, (4.0 * out.fine - out.coarse) / 3.0);
  return out;
}

double cutoff_eta(double s, double s0, double b) {
  const double half = 0.5 * b;
  return smoothstep5((std::abs(s - s0) - half) / half);
}

double cutoff_eta_derivative(double s, double s0, double b) {
  const double half = 0.5 * b;
  const double sign = s >= s0 ? 1.0 : -1.0;
  return sign * smoothstep5_derivative((std::abs(s - s0) - half) / half) / half;
}

double cutoff_eta_sup(double b) { return 15.0 / (8.0 * (0.5 * b)); }

double hardy_inf_ratio(double s0) {
  // Critical points of (1 + s^2)/(1 + (s - s0)^2) solve s^2 - s0 s - 1 = 0;
  // the value at infinity is 1.
  auto g = [s0](double s) { return (1.0 + s * s) / (1.0 + (s - s0) * (s - s0)); };
  const double root = std::sqrt(s0 * s0 + 4.0);
  return std::min({1.0, g(0.5 * (s0 + root)), g(0.5 * (s0 - root))});
}

HardyCertificate hardy_constants_from_lambda(double beta, double d, double s0, double b,
                                             const LambdaIResult& lambda) {
  if (!(b > 0.0)) throw PreconditionError("cutoff half-width b must be positive");
  HardyCertificate cert;
  cert.beta = beta;
  cert.d = d;
  cert.s0 = s0;
  cert.b = b;
  cert.lambda = lambda;
  cert.eta_sup = cutoff_eta_sup(b);
  const double l = lambda.value;
  const double g = 1.0 + beta * beta;
  const double eta2 = cert.eta_sup * cert.eta_sup;
  cert.c_prime = l / (16.0 * g * (l + eta2) + 2.0);
  cert.delta_star = l / (l + eta2 + 1.0 / (8.0 * g));
  cert.inf_ratio = hardy_inf_ratio(s0);
  cert.c = cert.c_prime * cert.inf_ratio;
  return cert;
}

HardyCertificate hardy_constants(const ShearProfile& profile, double d, double s0, double b,
                                 int n_s, int n_t) {
  if (profile.infinite_beta()) throw PreconditionError("Hardy constants need a finite beta");
  const auto supp = profile.support();
  if (!supp) throw PreconditionError("shear not repulsive: eps vanishes identically");
  const int samples = 4001;
  bool nontrivial_on_I = false;
  for (int i = 0; i < samples; ++i) {
    const double s = supp->first + (supp->second - supp->first) * i / (samples - 1);
    const double e = profile.epsilon(s);
    if (profile.beta * e < 0.0) throw PreconditionError("shear not repulsive");
    if (e != 0.0 && s > s0 - b && s < s0 + b) nontrivial_on_I = true;
  }
  for (double k : profile.knots())
    if (profile.beta * profile.epsilon(k) < 0.0) throw PreconditionError("shear not repulsive");
  if (!nontrivial_on_I) throw PreconditionError("eps vanishes on I; lambda_I would be 0");
  const LambdaIResult lambda = lambda_I(profile, d, {s0 - b, s0 + b}, n_s, n_t);
  return hardy_constants_from_lambda(profile.beta, d, s0, b, lambda);
}

namespace {

double local_hardy_weight(const ShearProfile& profile, double d, const Eigen::Vector2d& x) {
  const double ratio = chi1_derivative(x.y(), d) / chi1(x.y(), d);
  return profile.beta * profile.epsilon(x.x()) * (transverse_energy(d) + ratio * ratio);
}

}  // namespace

VerifyHardyReport verify_hardy(const HardyCertificate& certificate, const ShearProfile& profile,
                               int trials, const VerifyHardyOptions& options) {
  if (!(certificate.c >= 0.0)) throw PreconditionError("certificate constant c must be >= 0");
  if (options.delta < 0.0 || options.delta > 1.0) throw PreconditionError("delta must lie in [0, 1]");
  const double d = certificate.d;
  const double threshold = (1.0 + profile.beta * profile.beta) * transverse_energy(d);
  VerifyHardyReport report;
  report.c_used = certificate.c * options.c_scale;
  report.trials = trials;
  report.tol = options.tol;
  report.delta = options.delta;
  const double c_weight = (1.0 - options.delta) * report.c_used;

  // (a) random smooth test functions near the interval.
  std::mt19937_64 rng(options.seed);
  const double reach = 4.0 * certificate.b + 4.0;
  report.min_margin_a = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    const TestFunction psi =
        random_modal(rng, d, certificate.s0 - reach, certificate.s0 + reach, 3, 3);
    const FormIntegrals fi = form_integrals(profile, d, psi, options.quad);
    const double margin =
        (fi.h - threshold * fi.norm2 - c_weight * fi.inv_1ps2 - options.delta * fi.potential) /
        fi.norm2;
    if (margin < report.min_margin_a) {
      report.min_margin_a = margin;
      report.witness = describe(psi);
    }
  }
  report.pass_a = trials == 0 || report.min_margin_a >= -options.tol;

  // (b) smallest eigenvalue of the shifted, weighted operator.
  const StripGeometry geometry{d, options.L};
  const StructuredMesh mesh = build_mesh(geometry, options.n_s, options.n_t, BoundaryTag::dirichlet);
  const AssembledOperator op = assemble_h(mesh, profile);
  SparseMatrix shifted = op.stiffness - threshold * op.mass;
  if (c_weight != 0.0) {
    const SparseMatrix W = assemble_potential(
        mesh, op.dofs, [](const Eigen::Vector2d& x) { return 1.0 / (1.0 + x.x() * x.x()); });
    shifted -= c_weight * W;
  }
  if (options.delta != 0.0) {
    const SparseMatrix P = assemble_potential(
        mesh, op.dofs, [&](const Eigen::Vector2d& x) { return local_hardy_weight(profile, d, x); },
        PotentialRule::seven_point);
    shifted -= options.delta * P;
  }
  EigOptions eo;
  eo.k = 1;
  eo.shift = -0.01 * threshold;
  report.lambda_min_b = smallest_eigs(shifted, op.mass, eo).values(0);
  report.pass_b = report.lambda_min_b >= -options.tol;
  return report;
}

IdentityResidual ground_state_identity(const ShearProfile& profile, double d,
                                       const TestFunction& psi, const QuadOptions& quad) {
  if (profile.infinite_beta()) throw PreconditionError("ground-state identity needs a finite beta");
  const FormIntegrals fi = form_integrals(profile, d, psi, quad);
  const double threshold = (1.0 + profile.beta * profile.beta) * transverse_energy(d);
  IdentityResidual out;
  out.lhs = fi.h - threshold * fi.norm2;
  out.rhs = fi.shear_sq + fi.transverse + fi.potential;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

OneDHardyMargin one_d_hardy_check(const ShearProfile& profile, double d, double s0,
                                  const TestFunction& psi, const QuadOptions& quad) {
  if (profile.infinite_beta()) throw PreconditionError("1-D Hardy check needs a finite beta");
  for (const auto& term : psi.terms)
    if (term.coeff != 0.0 && s0 >= term.s.lo && s0 <= term.s.hi)
      throw PreconditionError("psi must vanish on a neighbourhood of s0");
  const FormIntegrals fi = form_integrals(profile, d, psi, quad, s0);
  OneDHardyMargin out;
  out.lhs = fi.shear_sq + fi.transverse;
  out.weighted = fi.inv_dist2;
  out.margin = out.lhs - out.weighted / (4.0 * (1.0 + profile.beta * profile.beta));
  return out;
}

}  // namespace shearspec
