#include "shearspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "shearspec/error.hpp"

namespace shearspec {
namespace {

template <unsigned N>
GaussRule make_rule() {
  using Boost = boost::math::quadrature::gauss<double, N>;
  const auto& x = Boost::abscissa();
  const auto& w = Boost::weights();
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    pts.emplace_back(x[i], w[i]);
    if (x[i] != 0.0) pts.emplace_back(-x[i], w[i]);
  }
  std::sort(pts.begin(), pts.end());
  GaussRule rule;
  rule.nodes.resize(static_cast<Eigen::Index>(pts.size()));
  rule.weights.resize(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rule.nodes[static_cast<Eigen::Index>(i)] = pts[i].first;
    rule.weights[static_cast<Eigen::Index>(i)] = pts[i].second;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static const GaussRule r7 = make_rule<7>();
  static const GaussRule r10 = make_rule<10>();
  static const GaussRule r15 = make_rule<15>();
  static const GaussRule r20 = make_rule<20>();
  static const GaussRule r25 = make_rule<25>();
  static const GaussRule r30 = make_rule<30>();
  switch (order) {
    case 7: return r7;
    case 10: return r10;
    case 15: return r15;
    case 20: return r20;
    case 25: return r25;
    case 30: return r30;
    default:
      throw PreconditionError("unsupported Gauss-Legendre order " +
                              std::to_string(order));
  }
}

CompositeRule composite_rule(double a, double b, std::vector<double> breaks,
                             int order, int subpanels) {
  if (!(b > a)) throw PreconditionError("composite_rule: empty interval");
  if (subpanels < 1) throw PreconditionError("composite_rule: subpanels < 1");
  breaks.push_back(a);
  breaks.push_back(b);
  std::erase_if(breaks, [&](double x) { return !(x >= a && x <= b); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-14; }),
               breaks.end());

  const GaussRule& g = gauss_legendre(order);
  CompositeRule rule;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double h = (breaks[p + 1] - lo) / subpanels;
    for (int q = 0; q < subpanels; ++q) {
      const double mid = lo + (q + 0.5) * h;
      for (Eigen::Index i = 0; i < g.nodes.size(); ++i) {
        rule.nodes.push_back(mid + 0.5 * h * g.nodes[i]);
        rule.weights.push_back(0.5 * h * g.weights[i]);
      }
    }
  }
  return rule;
}

double integrate(const std::function<double(double)>& f,
                 const CompositeRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 20, rel_tol, &err);
  if (!std::isfinite(value) || err > 10.0 * rel_tol * std::max(1.0, std::abs(value))) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b
        << "] did not converge: achieved error " << err;
    throw ConvergenceError(msg.str(), err);
  }
  return value;
}

}  // namespace shearspec
