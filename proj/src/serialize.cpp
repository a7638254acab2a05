#include "shearspec/serialize.hpp"

#include <cmath>
#include <limits>

#include "shearspec/error.hpp"

namespace shearspec {

Json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw SchemaError("<number>", "expected a number, got " + j.dump());
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

Json numbers(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_to_json(v(i)));
  return a;
}

std::vector<double> numbers_from(const Json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number_from_json(x));
  return v;
}

Eigen::VectorXd vector_from(const Json& j) {
  const auto v = numbers_from(j);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json matrix(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(numbers(Eigen::VectorXd(m.row(r).transpose())));
  return rows;
}

Eigen::MatrixXd matrix_from(const Json& j) {
  if (j.empty()) return {};
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = vector_from(j.at(r)).transpose();
  return m;
}

Json point(const Eigen::Vector2d& p) { return Json::array({number_to_json(p.x()), number_to_json(p.y())}); }

Eigen::Vector2d point_from(const Json& j) {
  return {number_from_json(j.at(0)), number_from_json(j.at(1))};
}

Json optional_number(const std::optional<double>& x) {
  return x ? number_to_json(*x) : Json(nullptr);
}

std::optional<double> optional_number_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return number_from_json(j);
}

double num(const Json& j, const char* key) { return number_from_json(j.at(key)); }

std::string bc_name(BoundaryTag tag) { return tag == BoundaryTag::dirichlet ? "dirichlet" : "neumann"; }

BoundaryTag bc_from(const std::string& s) {
  if (s == "dirichlet") return BoundaryTag::dirichlet;
  if (s == "neumann") return BoundaryTag::neumann;
  throw SchemaError("end_bc", "expected dirichlet or neumann, got '" + s + "'");
}

}  // namespace

void to_json(Json& j, const DeficitTerm& t) {
  j = Json::object();
  j["shape"] = to_string(t.shape());
  j["lo"] = number_to_json(t.lo());
  j["hi"] = number_to_json(t.hi());
  if (t.shape() == DeficitShape::tabulated) {
    j["s"] = numbers(t.table_s());
    j["values"] = numbers(t.table_values());
    return;
  }
  if (t.shape() == DeficitShape::custom) return;
  j["amplitude"] = number_to_json(t.amplitude());
  j["width"] = number_to_json(t.width());
}

void from_json(const Json& j, DeficitTerm& t) {
  const auto shape = j.at("shape").get<std::string>();
  if (shape == "custom") throw SchemaError("shape", "custom deficit terms cannot be read back");
  switch (deficit_shape_from_string(shape)) {
    case DeficitShape::indicator:
      t = DeficitTerm::indicator(num(j, "amplitude"), num(j, "lo"), num(j, "hi"), num(j, "width"));
      return;
    case DeficitShape::raised_cosine:
      t = DeficitTerm::raised_cosine(num(j, "amplitude"), num(j, "lo"), num(j, "hi"), num(j, "width"));
      return;
    case DeficitShape::gaussian:
      t = DeficitTerm::gaussian(num(j, "amplitude"), num(j, "lo"), num(j, "hi"), num(j, "width"));
      return;
    case DeficitShape::tabulated:
      t = DeficitTerm::tabulated(numbers_from(j.at("s")), numbers_from(j.at("values")));
      return;
    case DeficitShape::custom: break;
  }
}

void to_json(Json& j, const Deficit& d) {
  j = Json::array();
  for (const auto& t : d.terms()) j.push_back(t);
}

void from_json(const Json& j, Deficit& d) {
  std::vector<DeficitTerm> terms;
  for (const auto& x : j) terms.push_back(x.get<DeficitTerm>());
  d = Deficit(std::move(terms));
}

void to_json(Json& j, const ShearProfile& p) {
  j = Json::object();
  j["kind"] = to_string(p.kind);
  j["beta"] = number_to_json(p.beta);
  j["alpha"] = number_to_json(p.alpha);
  j["deficit"] = p.deficit;
  j["bounds"] = p.bounds ? Json::array({number_to_json(p.bounds->first), number_to_json(p.bounds->second)})
                         : Json(nullptr);
}

void from_json(const Json& j, ShearProfile& p) {
  p = ShearProfile{};
  p.kind = profile_kind_from_string(j.at("kind").get<std::string>());
  p.beta = num(j, "beta");
  p.alpha = num(j, "alpha");
  p.deficit = j.at("deficit").get<Deficit>();
  if (!j.at("bounds").is_null())
    p.bounds = std::make_pair(number_from_json(j.at("bounds").at(0)), number_from_json(j.at("bounds").at(1)));
}

void to_json(Json& j, const StripGeometry& g) {
  j = Json{{"d", number_to_json(g.d)}, {"L", number_to_json(g.L)}};
}

void from_json(const Json& j, StripGeometry& g) {
  g.d = num(j, "d");
  g.L = num(j, "L");
}

void to_json(Json& j, const SchemaGeometry& g) {
  j = Json::object();
  j["alpha"] = number_to_json(g.alpha);
  j["beta"] = number_to_json(g.beta);
  j["d"] = number_to_json(g.d);
  j["profile"] = g.profile;
  j["O"] = point(g.O);
  j["A"] = point(g.A);
  j["C"] = point(g.C);
  j["B"] = point(g.B);
  j["O_prime"] = point(g.O_prime);
  j["A_prime"] = point(g.A_prime);
  j["C_prime"] = point(g.C_prime);
  j["B_prime"] = point(g.B_prime);
  j["x0"] = number_to_json(g.x0);
  j["x0_prime"] = number_to_json(g.x0_prime);
}

void from_json(const Json& j, SchemaGeometry& g) {
  g.alpha = num(j, "alpha");
  g.beta = num(j, "beta");
  g.d = num(j, "d");
  g.profile = j.at("profile").get<ShearProfile>();
  g.O = point_from(j.at("O"));
  g.A = point_from(j.at("A"));
  g.C = point_from(j.at("C"));
  g.B = point_from(j.at("B"));
  g.O_prime = point_from(j.at("O_prime"));
  g.A_prime = point_from(j.at("A_prime"));
  g.C_prime = point_from(j.at("C_prime"));
  g.B_prime = point_from(j.at("B_prime"));
  g.x0 = num(j, "x0");
  g.x0_prime = num(j, "x0_prime");
}

void to_json(Json& j, const EigResult& r) {
  j = Json::object();
  j["values"] = numbers(r.values);
  j["residuals"] = numbers(r.residuals);
  j["iterations"] = r.iterations;
  j["shift_used"] = number_to_json(r.shift_used);
}

void from_json(const Json& j, EigResult& r) {
  r = EigResult{};
  r.values = vector_from(j.at("values"));
  r.residuals = vector_from(j.at("residuals"));
  r.iterations = j.at("iterations").get<int>();
  r.shift_used = num(j, "shift_used");
}

void to_json(Json& j, const SpectrumReport& r) {
  j = Json::object();
  j["profile"] = r.profile;
  j["geometry"] = r.geometry;
  j["n_s"] = r.n_s;
  j["n_t"] = r.n_t;
  j["end_bc"] = bc_name(r.end_bc);
  j["eig"] = r.eig;
  j["threshold"] = optional_number(r.threshold);
  j["margin"] = number_to_json(r.margin);
  j["count_below_threshold"] = r.count_below_threshold;
  j["ladder"] = numbers(r.ladder);
}

void from_json(const Json& j, SpectrumReport& r) {
  r.profile = j.at("profile").get<ShearProfile>();
  r.geometry = j.at("geometry").get<StripGeometry>();
  r.n_s = j.at("n_s").get<int>();
  r.n_t = j.at("n_t").get<int>();
  r.end_bc = bc_from(j.at("end_bc").get<std::string>());
  r.eig = j.at("eig").get<EigResult>();
  r.threshold = optional_number_from(j.at("threshold"));
  r.margin = num(j, "margin");
  r.count_below_threshold = j.at("count_below_threshold").get<int>();
  r.ladder = numbers_from(j.at("ladder"));
}

void to_json(Json& j, const Rung& r) {
  j = Json{{"L", number_to_json(r.L)}, {"n_s", r.n_s}, {"n_t", r.n_t}};
}

void from_json(const Json& j, Rung& r) {
  r.L = num(j, "L");
  r.n_s = j.at("n_s").get<int>();
  r.n_t = j.at("n_t").get<int>();
}

void to_json(Json& j, const ConvergenceTable& t) {
  j = Json::object();
  j["rungs"] = t.rungs;
  j["lambda1"] = numbers(t.lambda1);
  j["nonincreasing"] = t.nonincreasing;
  j["extrapolated"] = number_to_json(t.extrapolated);
  j["last_difference"] = number_to_json(t.last_difference);
  j["threshold"] = optional_number(t.threshold);
}

void from_json(const Json& j, ConvergenceTable& t) {
  t.rungs = j.at("rungs").get<std::vector<Rung>>();
  t.lambda1 = numbers_from(j.at("lambda1"));
  t.nonincreasing = j.at("nonincreasing").get<bool>();
  t.extrapolated = num(j, "extrapolated");
  t.last_difference = num(j, "last_difference");
  t.threshold = optional_number_from(j.at("threshold"));
}

void to_json(Json& j, const DispersionCurve& c) {
  j = Json::object();
  j["beta"] = number_to_json(c.beta);
  j["d"] = number_to_json(c.d);
  j["n_t"] = c.n_t;
  j["xi_grid"] = numbers(c.xi_grid);
  j["analytic"] = matrix(c.analytic);
  j["numeric"] = matrix(c.numeric);
  j["band1_min"] = number_to_json(c.band1_min);
  j["band1_argmin"] = number_to_json(c.band1_argmin);
  j["threshold"] = number_to_json(c.threshold);
}

void from_json(const Json& j, DispersionCurve& c) {
  c.beta = num(j, "beta");
  c.d = num(j, "d");
  c.n_t = j.at("n_t").get<int>();
  c.xi_grid = numbers_from(j.at("xi_grid"));
  c.analytic = matrix_from(j.at("analytic"));
  c.numeric = matrix_from(j.at("numeric"));
  c.band1_min = num(j, "band1_min");
  c.band1_argmin = num(j, "band1_argmin");
  c.threshold = num(j, "threshold");
}

void to_json(Json& j, const LambdaIResult& r) {
  j = Json::object();
  j["value"] = number_to_json(r.value);
  j["coarse"] = number_to_json(r.coarse);
  j["fine"] = number_to_json(r.fine);
  j["interval"] = Json::array({number_to_json(r.interval.first), number_to_json(r.interval.second)});
  j["n_s"] = r.n_s;
  j["n_t"] = r.n_t;
}

void from_json(const Json& j, LambdaIResult& r) {
  r.value = num(j, "value");
  r.coarse = num(j, "coarse");
  r.fine = num(j, "fine");
  r.interval = {number_from_json(j.at("interval").at(0)), number_from_json(j.at("interval").at(1))};
  r.n_s = j.at("n_s").get<int>();
  r.n_t = j.at("n_t").get<int>();
}

void to_json(Json& j, const HardyCertificate& c) {
  j = Json::object();
  j["beta"] = number_to_json(c.beta);
  j["d"] = number_to_json(c.d);
  j["s0"] = number_to_json(c.s0);
  j["b"] = number_to_json(c.b);
  j["lambda_I"] = c.lambda;
  j["eta_sup"] = number_to_json(c.eta_sup);
  j["c_prime"] = number_to_json(c.c_prime);
  j["c"] = number_to_json(c.c);
  j["delta_star"] = number_to_json(c.delta_star);
  j["inf_ratio"] = number_to_json(c.inf_ratio);
}

void from_json(const Json& j, HardyCertificate& c) {
  c.beta = num(j, "beta");
  c.d = num(j, "d");
  c.s0 = num(j, "s0");
  c.b = num(j, "b");
  c.lambda = j.at("lambda_I").get<LambdaIResult>();
  c.eta_sup = num(j, "eta_sup");
  c.c_prime = num(j, "c_prime");
  c.c = num(j, "c");
  c.delta_star = num(j, "delta_star");
  c.inf_ratio = num(j, "inf_ratio");
}

void to_json(Json& j, const VerifyHardyReport& r) {
  j = Json::object();
  j["c_used"] = number_to_json(r.c_used);
  j["trials"] = r.trials;
  j["min_margin_a"] = number_to_json(r.min_margin_a);
  j["pass_a"] = r.pass_a;
  j["lambda_min_b"] = number_to_json(r.lambda_min_b);
  j["pass_b"] = r.pass_b;
  j["tol"] = number_to_json(r.tol);
  j["delta"] = number_to_json(r.delta);
  j["witness"] = r.witness;
}

void from_json(const Json& j, VerifyHardyReport& r) {
  r.c_used = num(j, "c_used");
  r.trials = j.at("trials").get<int>();
  r.min_margin_a = num(j, "min_margin_a");
  r.pass_a = j.at("pass_a").get<bool>();
  r.lambda_min_b = num(j, "lambda_min_b");
  r.pass_b = j.at("pass_b").get<bool>();
  r.tol = num(j, "tol");
  r.delta = num(j, "delta");
  r.witness = j.at("witness").get<std::vector<std::string>>();
}

void to_json(Json& j, const GapSample& g) {
  j = Json{{"n", number_to_json(g.n)}, {"delta", number_to_json(g.delta)}, {"gap", number_to_json(g.gap)}};
}

void from_json(const Json& j, GapSample& g) {
  g.n = num(j, "n");
  g.delta = num(j, "delta");
  g.gap = num(j, "gap");
}

void to_json(Json& j, const VariationalCertificate& c) {
  j = Json::object();
  j["condition"] = c.condition == Condition::i ? "i" : "ii";
  j["n"] = number_to_json(c.n);
  j["rayleigh_gap"] = number_to_json(c.rayleigh_gap);
  j["verdict"] = c.verdict;
  j["limit"] = number_to_json(c.limit);
  j["shear_integral"] = number_to_json(c.shear_integral);
  j["delta"] = number_to_json(c.delta);
  j["xi_label"] = c.xi_label;
  j["functional_F"] = number_to_json(c.functional_F);
  j["family_F"] = numbers(c.family_F);
  j["h1_phi"] = number_to_json(c.h1_phi);
  j["scanned"] = c.scanned;
}

void from_json(const Json& j, VariationalCertificate& c) {
  const auto cond = j.at("condition").get<std::string>();
  if (cond != "i" && cond != "ii") throw SchemaError("condition", "expected i or ii");
  c.condition = cond == "i" ? Condition::i : Condition::ii;
  c.n = num(j, "n");
  c.rayleigh_gap = num(j, "rayleigh_gap");
  c.verdict = j.at("verdict").get<bool>();
  c.limit = num(j, "limit");
  c.shear_integral = num(j, "shear_integral");
  c.delta = num(j, "delta");
  c.xi_label = j.at("xi_label").get<std::string>();
  c.functional_F = num(j, "functional_F");
  c.family_F = numbers_from(j.at("family_F"));
  c.h1_phi = num(j, "h1_phi");
  c.scanned = j.at("scanned").get<std::vector<GapSample>>();
}

void to_json(Json& j, const BracketingReport& r) {
  j = Json::object();
  j["alpha"] = number_to_json(r.alpha);
  j["beta"] = number_to_json(r.beta);
  j["d"] = number_to_json(r.d);
  j["c1"] = number_to_json(r.c1);
  j["c2"] = number_to_json(r.c2);
  j["schema"] = r.schema;
  j["exterior_threshold"] = number_to_json(r.exterior_threshold);
  j["interior_lower_bound"] = number_to_json(r.interior_lower_bound);
  j["verge_lambda1_minus"] = number_to_json(r.verge_lambda1_minus);
  j["verge_lambda1_plus"] = number_to_json(r.verge_lambda1_plus);
  j["verge_lambda1"] = number_to_json(r.verge_lambda1);
  j["triangle_lambda1"] = number_to_json(r.triangle_lambda1);
  j["triangle_bound_claimed"] = number_to_json(r.triangle_bound_claimed);
  j["triangle_bound_rectangle"] = number_to_json(r.triangle_bound_rectangle);
  j["combined_min"] = number_to_json(r.combined_min);
  j["alpha0_estimate"] = optional_number(r.alpha0_estimate);
}

void from_json(const Json& j, BracketingReport& r) {
  r.alpha = num(j, "alpha");
  r.beta = num(j, "beta");
  r.d = num(j, "d");
  r.c1 = num(j, "c1");
  r.c2 = num(j, "c2");
  r.schema = j.at("schema").get<SchemaGeometry>();
  r.exterior_threshold = num(j, "exterior_threshold");
  r.interior_lower_bound = num(j, "interior_lower_bound");
  r.verge_lambda1_minus = num(j, "verge_lambda1_minus");
  r.verge_lambda1_plus = num(j, "verge_lambda1_plus");
  r.verge_lambda1 = num(j, "verge_lambda1");
  r.triangle_lambda1 = num(j, "triangle_lambda1");
  r.triangle_bound_claimed = num(j, "triangle_bound_claimed");
  r.triangle_bound_rectangle = num(j, "triangle_bound_rectangle");
  r.combined_min = num(j, "combined_min");
  r.alpha0_estimate = optional_number_from(j.at("alpha0_estimate"));
}

void to_json(Json& j, const Alpha0Entry& e) {
  j = Json::object();
  j["alpha"] = number_to_json(e.alpha);
  j["schema_defined"] = e.schema_defined;
  j["report"] = e.report ? Json(*e.report) : Json(nullptr);
  j["bracket_ok"] = e.bracket_ok;
  j["count_below"] = e.count_below ? Json(*e.count_below) : Json(nullptr);
  j["strip_lambda1"] = number_to_json(e.strip_lambda1);
  j["qualifies"] = e.qualifies;
  j["note"] = e.note;
}

void from_json(const Json& j, Alpha0Entry& e) {
  e.alpha = num(j, "alpha");
  e.schema_defined = j.at("schema_defined").get<bool>();
  e.report.reset();
  if (!j.at("report").is_null()) e.report = j.at("report").get<BracketingReport>();
  e.bracket_ok = j.at("bracket_ok").get<bool>();
  e.count_below.reset();
  if (!j.at("count_below").is_null()) e.count_below = j.at("count_below").get<int>();
  e.strip_lambda1 = num(j, "strip_lambda1");
  e.qualifies = j.at("qualifies").get<bool>();
  e.note = j.at("note").get<std::string>();
}

void to_json(Json& j, const Alpha0Result& r) {
  j = Json::object();
  j["threshold"] = number_to_json(r.threshold);
  j["entries"] = r.entries;
  j["alpha0"] = optional_number(r.alpha0);
  j["soundness"] = r.soundness;
}

void from_json(const Json& j, Alpha0Result& r) {
  r.threshold = num(j, "threshold");
  r.entries = j.at("entries").get<std::vector<Alpha0Entry>>();
  r.alpha0 = optional_number_from(j.at("alpha0"));
  r.soundness = j.at("soundness").get<bool>();
}

}  // namespace shearspec
