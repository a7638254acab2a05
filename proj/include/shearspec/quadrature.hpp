#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace shearspec {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Supported orders: 7, 10, 15, 20, 25, 30.
const GaussRule& gauss_legendre(int order);

/// Nodes and weights of a composite Gauss-Legendre rule on [a, b] split at
/// `breaks` (sorted, clipped to [a, b]) with `subpanels` equal pieces per
/// break interval.
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

CompositeRule composite_rule(double a, double b, std::vector<double> breaks,
                             int order, int subpanels);

double integrate(const std::function<double(double)>& f,
                 const CompositeRule& rule);

/// Adaptive Gauss-Kronrod; throws ConvergenceError carrying the achieved
/// error estimate when the relative tolerance is not met.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-12);

}  // namespace shearspec
