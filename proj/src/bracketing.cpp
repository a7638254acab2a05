#include "shearspec/bracketing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shearspec/assembly.hpp"
#include "shearspec/error.hpp"
#include "shearspec/parallel.hpp"
#include "shearspec/spectra.hpp"

namespace shearspec {

double interior_width_bound(double alpha, double beta, double d, double c2) {
  const double w = c2 * std::abs(alpha) - beta;
  if (!(w > 0.0)) return 0.0;
  return std::pow(std::numbers::pi * w / d, 2);
}

StructuredMesh verge_mesh(const SchemaGeometry& g, int sign, int n) {
  const auto D = BoundaryTag::dirichlet;
  const auto N = BoundaryTag::neumann;
  const ShearProfile& p = g.profile;
  if (sign < 0) {
    // O -> A (interface), A -> C (upper wall), C -> B (graph of f + d), B -> O (interface).
    const double x0 = g.x0;
    const double d = g.d;
    return build_quad_mesh({g.O, g.A, g.C, g.B}, n, n, {N, D, D, N}, [&, x0, d](double u) {
      const double x = x0 * (1.0 - u);
      return Eigen::Vector2d(x, eval_f(p, x) + d);
    });
  }
  const double x0p = g.x0_prime;
  return build_quad_mesh({g.O_prime, g.A_prime, g.C_prime, g.B_prime}, n, n, {N, D, D, N},
                         [&, x0p](double u) {
                           const double x = x0p + (1.0 - x0p) * u;
                           return Eigen::Vector2d(x, eval_f(p, x));
                         });
}

StructuredMesh limit_triangle_mesh(const SchemaGeometry& g, int n) {
  return build_triangle_mesh({g.O, g.A, g.C}, n,
                             {BoundaryTag::neumann, BoundaryTag::dirichlet, BoundaryTag::dirichlet});
}

double laplacian_lambda1(const StructuredMesh& mesh, const EigOptions& opts) {
  const DofMap dofs = DofMap::eliminate_dirichlet(mesh);
  const SparseMatrix K =
      assemble_stiffness(mesh, dofs, [](const Eigen::Vector2d&) { return Eigen::Matrix2d::Identity().eval(); });
  const SparseMatrix M = assemble_mass(mesh, dofs);
  EigOptions o = opts;
  o.k = 1;
  if (!o.shift) o.shift = 0.0;
  return smallest_eigs(K, M, o).values(0);
}

BracketingReport bracket_thresholds(double alpha, double beta, double d, const Deficit& eps,
                                    double c1, double c2, const BracketingOptions& options) {
  BracketingReport r;
  r.alpha = alpha;
  r.beta = beta;
  r.d = d;
  r.c1 = c1;
  r.c2 = c2;
  r.schema = schema_points(alpha, beta, eps, d, c1, c2);
  const double e1b = *essential_threshold(beta, d);
  r.exterior_threshold = e1b;
  r.interior_lower_bound = interior_width_bound(alpha, beta, d, c2);
  r.verge_lambda1_minus = laplacian_lambda1(verge_mesh(r.schema, -1, options.n_verge), options.eig);
  r.verge_lambda1_plus = laplacian_lambda1(verge_mesh(r.schema, +1, options.n_verge), options.eig);
  r.verge_lambda1 = std::min(r.verge_lambda1_minus, r.verge_lambda1_plus);
  r.triangle_lambda1 = laplacian_lambda1(limit_triangle_mesh(r.schema, options.n_triangle), options.eig);
  r.triangle_bound_claimed = (1.0 + 1.0 / (beta * beta)) * e1b;
  r.triangle_bound_rectangle = (1.0 + 1.0 / (4.0 * beta * beta)) * e1b;
  r.combined_min = std::min({r.exterior_threshold, r.interior_lower_bound, r.verge_lambda1});
  return r;
}

Alpha0Result find_alpha0(double beta, double d, const Deficit& eps, double c1, double c2,
                         const std::vector<double>& alpha_grid, const BracketingOptions& options,
                         int jobs) {
  if (alpha_grid.empty()) throw PreconditionError("empty alpha grid");
  Alpha0Result out;
  out.threshold = *essential_threshold(beta, d);
  out.entries.resize(alpha_grid.size());

  auto strip_check = [&](Alpha0Entry& e) {
    const ShearProfile profile = ShearProfile::schema(e.alpha, beta, eps, c1, c2);
    EigOptions o = options.eig;
    o.k = 1;
    const SpectrumReport s = truncated_spectrum(profile, {d, options.L}, options.n_s, options.n_t,
                                                BoundaryTag::dirichlet, o);
    e.count_below = s.count_below_threshold;
    e.strip_lambda1 = s.eig.values(0);
  };

  parallel_for(alpha_grid.size(), jobs, [&](std::size_t i) {
    Alpha0Entry& e = out.entries[i];
    e.alpha = alpha_grid[i];
    if (e.alpha * beta >= 0.0) {
      strip_check(e);
      e.qualifies = *e.count_below == 0;
      e.note = "repulsive orientation";
      return;
    }
    try {
      e.report = bracket_thresholds(e.alpha, beta, d, eps, c1, c2, options);
      e.schema_defined = true;
    } catch (const PreconditionError& err) {
      e.note = err.what();
    }
    strip_check(e);
    if (e.report) {
      e.bracket_ok = e.report->combined_min >= out.threshold;
      e.qualifies = e.bracket_ok && *e.count_below == 0;
    }
  });

  for (const auto& e : out.entries)
    if (e.report && e.count_below &&
        e.report->combined_min > e.strip_lambda1 + 1e-8 * std::max(1.0, e.strip_lambda1))
      out.soundness = false;

  // Walk from the largest |alpha| towards smaller |alpha| while qualifying.
  std::vector<std::size_t> order(alpha_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(alpha_grid[a]) > std::abs(alpha_grid[b]);
  });
  for (std::size_t i : order) {
    if (!out.entries[i].qualifies) break;
    out.alpha0 = alpha_grid[i];
  }
  for (auto& e : out.entries)
    if (e.report) e.report->alpha0_estimate = out.alpha0;
  return out;
}

}  // namespace shearspec
