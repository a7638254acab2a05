#include "shearspec/form_integrals.hpp"

#include <cmath>

#include "shearspec/error.hpp"
#include "shearspec/quadrature.hpp"

namespace shearspec {

FormIntegrals form_integrals(const ShearProfile& profile, double d, const TestFunction& psi,
                             const QuadOptions& quad, std::optional<double> s0,
                             std::optional<std::pair<double, double>> interval) {
  if (!(d > 0.0)) throw PreconditionError("degenerate geometry: d must be positive");
  const auto [lo, hi] = psi.s_range();
  std::vector<double> breaks = psi.s_breaks();
  for (double k : profile.knots()) breaks.push_back(k);
  if (interval) {
    breaks.push_back(interval->first);
    breaks.push_back(interval->second);
  }
  if (s0) breaks.push_back(*s0);
  const CompositeRule rs = composite_rule(lo, hi, breaks, quad.s_order, quad.s_subpanels);
  const CompositeRule rt = composite_rule(0.0, d, {}, quad.t_order, quad.t_subpanels);

  const double e1 = transverse_energy(d);
  const bool finite_beta = !profile.infinite_beta();
  const double beta = finite_beta ? profile.beta : 0.0;
  FormIntegrals out;
  for (std::size_t i = 0; i < rs.nodes.size(); ++i) {
    const double s = rs.nodes[i];
    const double fp = eval_fprime(profile, s);
    const double eps = finite_beta ? profile.epsilon(s) : 0.0;
    const bool in_interval = interval && s > interval->first && s < interval->second;
    for (std::size_t j = 0; j < rt.nodes.size(); ++j) {
      const double t = rt.nodes[j];
      const double w = rs.weights[i] * rt.weights[j];
      const double v = psi.value(s, t);
      const double vs = psi.ds(s, t);
      const double vt = psi.dt(s, t);
      const double ratio = chi1_derivative(t, d) / chi1(t, d);
      const double r = vt - ratio * v;
      const double a = vs - fp * vt;
      const double b = vs - eps * vt - beta * r;
      out.h += w * (a * a + vt * vt);
      out.norm2 += w * v * v;
      out.shear_sq += w * b * b;
      out.transverse += w * r * r;
      out.potential += w * beta * eps * (e1 + ratio * ratio) * v * v;
      out.inv_1ps2 += w * v * v / (1.0 + s * s);
      if (s0 && s != *s0) out.inv_dist2 += w * v * v / ((s - *s0) * (s - *s0));
      if (in_interval) out.norm2_interval += w * v * v;
    }
  }
  return out;
}

}  // namespace shearspec
