#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shearspec/eigensolve.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/mesh.hpp"

namespace shearspec {

struct BracketingOptions {
  int n_verge = 48;     // quad mesh resolution per side of each verge set
  int n_triangle = 48;  // limit triangle resolution
  /// Cross-check strip for find_alpha0.
  double L = 8.0;
  int n_s = 1600;
  int n_t = 16;
  EigOptions eig;
};

struct BracketingReport {
  double alpha = 0.0;
  double beta = 0.0;
  double d = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;
  SchemaGeometry schema;
  double exterior_threshold = 0.0;
  double interior_lower_bound = 0.0;
  double verge_lambda1_minus = 0.0;
  double verge_lambda1_plus = 0.0;
  double verge_lambda1 = 0.0;
  double triangle_lambda1 = 0.0;
  /// Candidate lower bounds for the triangle: (1 + beta^-2) E_1(beta) and
  /// the mixed-rectangle value (1 + 1/(4 beta^2)) E_1(beta).
  double triangle_bound_claimed = 0.0;
  double triangle_bound_rectangle = 0.0;
  double combined_min = 0.0;
  std::optional<double> alpha0_estimate;
};

/// pi^2 (c2 |alpha| - beta)^2 / d^2 for c2 |alpha| > beta, else 0.
double interior_width_bound(double alpha, double beta, double d, double c2);

/// Mesh of the verge set O A C B (sign < 0) or O' A' C' B' (sign > 0):
/// Neumann on the two interfaces, Dirichlet on the graph pieces.
StructuredMesh verge_mesh(const SchemaGeometry& g, int sign, int n);
/// Triangle O A C with Neumann on O A.
StructuredMesh limit_triangle_mesh(const SchemaGeometry& g, int n);

/// Lowest eigenvalue of the Laplacian with the mesh's boundary tags.
double laplacian_lambda1(const StructuredMesh& mesh, const EigOptions& opts = {});

BracketingReport bracket_thresholds(double alpha, double beta, double d, const Deficit& eps,
                                    double c1, double c2, const BracketingOptions& options = {});

struct Alpha0Entry {
  double alpha = 0.0;
  bool schema_defined = false;
  std::optional<BracketingReport> report;
  bool bracket_ok = false;      // combined_min >= E_1(beta)
  std::optional<int> count_below;  // truncated-strip count, when computed
  double strip_lambda1 = 0.0;
  bool qualifies = false;
  std::string note;
};

struct Alpha0Result {
  double threshold = 0.0;  // E_1(beta)
  std::vector<Alpha0Entry> entries;  // grid order
  std::optional<double> alpha0;
  bool soundness = true;  // combined_min <= strip lambda_1 + tol wherever both exist
};

/// alpha0 is the grid value of smallest |alpha| such that it and every
/// grid value of larger |alpha| qualify. Negative alpha qualify through the
/// bracketing bound, cross-checked by a truncated strip with no eigenvalue
/// below E_1(beta); alpha with alpha beta >= 0 qualify through the truncated
/// strip alone.
Alpha0Result find_alpha0(double beta, double d, const Deficit& eps, double c1, double c2,
                         const std::vector<double>& alpha_grid,
                         const BracketingOptions& options = {}, int jobs = 1);

}  // namespace shearspec
