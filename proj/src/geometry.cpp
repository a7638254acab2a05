#include "shearspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "shearspec/error.hpp"
#include "shearspec/quadrature.hpp"

namespace shearspec {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::bump: return "bump";
    case ProfileKind::schema: return "schema";
    case ProfileKind::linear_unbounded: return "linear-unbounded";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "constant") return ProfileKind::constant;
  if (name == "bump") return ProfileKind::bump;
  if (name == "schema") return ProfileKind::schema;
  if (name == "linear-unbounded") return ProfileKind::linear_unbounded;
  throw PreconditionError("unknown profile kind '" + name + "'");
}

ShearProfile ShearProfile::constant(double beta) {
  ShearProfile p;
  p.kind = ProfileKind::constant;
  p.beta = beta;
  return p;
}

ShearProfile ShearProfile::bump(double beta, Deficit deficit) {
  ShearProfile p;
  p.kind = ProfileKind::bump;
  p.beta = beta;
  p.deficit = std::move(deficit);
  return p;
}

ShearProfile ShearProfile::schema(double alpha, double beta, Deficit deficit,
                                  double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 >= c1))
    throw PreconditionError("schema bounds need 0 < c1 <= c2");
  auto supp = deficit.support();
  if (!supp || supp->first < 0.0 || supp->second > 1.0)
    throw PreconditionError("schema deficit must be supported in [0, 1]");
  for (int i = 0; i <= 1000; ++i) {
    const double s = i / 1000.0;
    const double e = deficit.value(s);
    if (e < c1 - 1e-14 || e > c2 + 1e-14) {
      std::ostringstream msg;
      msg << "schema deficit violates c1 <= eps <= c2 at s=" << s << " (eps=" << e << ")";
      throw PreconditionError(msg.str());
    }
  }
  ShearProfile p;
  p.kind = ProfileKind::schema;
  p.alpha = alpha;
  p.beta = beta;
  p.deficit = std::move(deficit);
  p.bounds = std::make_pair(c1, c2);
  return p;
}

ShearProfile ShearProfile::linear_unbounded() {
  ShearProfile p;
  p.kind = ProfileKind::linear_unbounded;
  p.beta = std::numeric_limits<double>::infinity();
  return p;
}

double ShearProfile::epsilon(double s) const {
  if (kind == ProfileKind::constant || kind == ProfileKind::linear_unbounded) return 0.0;
  return alpha * deficit.value(s);
}

double ShearProfile::epsilon_derivative(double s) const {
  if (kind == ProfileKind::constant || kind == ProfileKind::linear_unbounded) return 0.0;
  return alpha * deficit.derivative(s);
}

bool ShearProfile::has_epsilon_derivative() const {
  return kind == ProfileKind::constant || deficit.differentiable();
}

std::optional<std::pair<double, double>> ShearProfile::support() const {
  if (kind == ProfileKind::constant || kind == ProfileKind::linear_unbounded)
    return std::nullopt;
  return deficit.support();
}

std::vector<double> ShearProfile::knots() const {
  if (kind == ProfileKind::constant || kind == ProfileKind::linear_unbounded) return {};
  return deficit.knots();
}

double ShearProfile::sup_abs_epsilon(int samples) const {
  auto supp = support();
  if (!supp) return 0.0;
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = supp->first + (supp->second - supp->first) * i / (samples - 1);
    m = std::max(m, std::abs(epsilon(s)));
  }
  for (double k : knots()) m = std::max(m, std::abs(epsilon(k)));
  return m;
}

double eval_fprime(const ShearProfile& profile, double s) {
  if (profile.kind == ProfileKind::linear_unbounded) return s;
  return profile.beta + profile.epsilon(s);
}

double eval_f(const ShearProfile& profile, double s, double rel_tol) {
  switch (profile.kind) {
    case ProfileKind::constant: return profile.beta * s;
    case ProfileKind::linear_unbounded: return 0.5 * s * s;
    default: break;
  }
  double integral = 0.0;
  for (const auto& term : profile.deficit.terms()) {
    if (auto closed = term.closed_form_integral(0.0, s)) {
      integral += *closed;
      continue;
    }
    auto [lo, hi] = term.support();
    const double a = std::clamp(0.0, lo, hi);
    const double b = std::clamp(s, lo, hi);
    if (a == b) continue;
    // Split at knots so every piece is smooth.
    std::vector<double> cuts = term.knots();
    cuts.push_back(a);
    cuts.push_back(b);
    const double left = std::min(a, b);
    const double right = std::max(a, b);
    std::erase_if(cuts, [&](double x) { return x < left || x > right; });
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double piece = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      piece += integrate_adaptive([&](double u) { return term.value(u); }, cuts[i],
                                  cuts[i + 1], rel_tol);
    integral += (b >= a ? piece : -piece);
  }
  return profile.beta * s + profile.alpha * integral;
}

void StripGeometry::validate(const ShearProfile& profile) const {
  if (!(d > 0.0)) throw PreconditionError("strip width d must be positive");
  if (!(L > 0.0)) throw PreconditionError("truncation half-length L must be positive");
  if (auto supp = profile.support()) {
    if (!(L > std::max(std::abs(supp->first), std::abs(supp->second))))
      throw PreconditionError("truncation L must exceed the deficit support");
  }
}

namespace {

double bisect(const std::function<double(double)>& g, double lo, double hi,
              double tol) {
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo * ghi > 0.0)
    throw PreconditionError("schema decomposition undefined for this alpha");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Eigen::Vector2d foot_of_perpendicular(const Eigen::Vector2d& p,
                                      const Eigen::Vector2d& on_line,
                                      const Eigen::Vector2d& direction) {
  const Eigen::Vector2d u = direction.normalized();
  return on_line + (p - on_line).dot(u) * u;
}

}  // namespace

SchemaGeometry schema_points(double alpha, double beta, const Deficit& eps,
                             double d, double c1, double c2) {
  if (!(beta > 0.0) || !(alpha < 0.0))
    throw PreconditionError("schema decomposition needs beta > 0 and alpha < 0");
  if (!(d > 0.0)) throw PreconditionError("strip width d must be positive");
  SchemaGeometry g;
  g.alpha = alpha;
  g.beta = beta;
  g.d = d;
  g.profile = ShearProfile::schema(alpha, beta, eps, c1, c2);
  const auto f = [&](double x) { return eval_f(g.profile, x); };
  const double f1 = f(1.0);
  if (!(f1 + d < 0.0))
    throw PreconditionError("schema decomposition undefined for this alpha");

  g.x0 = bisect([&](double x) { return f(x) + d; }, 0.0, 1.0, kSchemaRootTol);
  g.x0_prime = bisect([&](double x) { return f(x) - f1 - d; }, 0.0, 1.0, kSchemaRootTol);

  const Eigen::Vector2d slope(1.0, beta);
  g.O = {0.0, 0.0};
  g.C = {0.0, d};
  g.A = foot_of_perpendicular(g.O, g.C, slope);
  g.B = {g.x0, 0.0};
  g.O_prime = {1.0, f1 + d};
  g.C_prime = {1.0, f1};
  g.A_prime = foot_of_perpendicular(g.O_prime, g.C_prime, slope);
  g.B_prime = {g.x0_prime, f1 + d};
  return g;
}

AreaEstimate ball_intersection_area(const ShearProfile& profile, double d,
                                    const Eigen::Vector2d& center, double radius,
                                    std::mt19937_64& rng, std::int64_t samples) {
  if (!(radius > 0.0)) throw PreconditionError("ball radius must be positive");
  if (samples < 1) throw PreconditionError("sample count must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double r = radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const double x = center.x() + r * std::cos(phi);
    const double y = center.y() + r * std::sin(phi);
    const double fx = eval_f(profile, x);
    if (y > fx && y < fx + d) ++hits;
  }
  const double disc = std::numbers::pi * radius * radius;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  AreaEstimate est;
  est.area = disc * p;
  est.std_error = disc * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  est.samples = samples;
  return est;
}

double transverse_energy(double d) {
  const double k = std::numbers::pi / d;
  return k * k;
}

double chi1(double t, double d) {
  return std::sqrt(2.0 / d) * std::sin(std::numbers::pi * t / d);
}

double chi1_derivative(double t, double d) {
  return std::sqrt(2.0 / d) * (std::numbers::pi / d) * std::cos(std::numbers::pi * t / d);
}

}  // namespace shearspec
