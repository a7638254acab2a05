#include "shearspec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "shearspec/error.hpp"

namespace shearspec {

std::string to_string(Command c) {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::dispersion: return "dispersion";
    case Command::hardy: return "hardy";
    case Command::certify: return "certify";
    case Command::bracket: return "bracket";
    case Command::identity_check: return "identity-check";
    case Command::probe_volume: return "probe-volume";
  }
  return "unknown";
}

Command command_from_string(const std::string& name) {
  for (Command c : {Command::spectrum, Command::dispersion, Command::hardy, Command::certify,
                    Command::bracket, Command::identity_check, Command::probe_volume})
    if (to_string(c) == name) return c;
  throw SchemaError("command", "unknown command '" + name + "'");
}

double parse_number_with_pi(const std::string& text) {
  static const std::regex pi_form(R"(^\s*(?:([-+]?[0-9.eE+-]+)\s*\*\s*)?(-?)pi(?:\s*/\s*([0-9.eE+-]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double v = std::numbers::pi;
    if (m[1].matched) v *= std::stod(m[1].str());
    if (m[2].length() > 0) v = -v;
    if (m[3].matched) v /= std::stod(m[3].str());
    return v;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw PreconditionError("not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw PreconditionError("not a number: '" + text + "'");
  return v;
}

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const YAML::Node& node, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw SchemaError(path.empty() ? "<root>" : path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw SchemaError(join(path, key), "unknown field");
  }
}

double as_number(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw SchemaError(path, "expected a number");
  try {
    const double v = parse_number_with_pi(node.Scalar());
    if (!std::isfinite(v)) throw SchemaError(path, "must be finite");
    return v;
  } catch (const PreconditionError& e) {
    throw SchemaError(path, e.what());
  }
}

int as_int(const YAML::Node& node, const std::string& path) {
  const double v = as_number(node, path);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw SchemaError(path, "expected an integer");
  return static_cast<int>(v);
}

bool as_bool(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw SchemaError(path, "expected true or false");
  }
}

std::string as_string(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw SchemaError(path, "expected a string");
  return node.Scalar();
}

std::vector<double> as_numbers(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw SchemaError(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(as_number(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

const YAML::Node require(const YAML::Node& parent, const std::string& parent_path,
                         const std::string& key) {
  const YAML::Node n = parent[key];
  if (!n) throw SchemaError(join(parent_path, key), "missing required field");
  return n;
}

template <typename T, typename F>
void optional_field(const YAML::Node& parent, const std::string& parent_path,
                    const std::string& key, T& target, F convert) {
  const YAML::Node n = parent[key];
  if (n) target = convert(n, join(parent_path, key));
}

void positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw SchemaError(path, "must be positive");
}

void at_least(int v, int lo, const std::string& path) {
  if (v < lo) throw SchemaError(path, "must be >= " + std::to_string(lo));
}

DeficitTerm parse_term(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"shape", "amplitude", "lo", "hi", "width", "s", "values"});
  const auto shape_name = as_string(require(node, path, "shape"), join(path, "shape"));
  DeficitShape shape;
  try {
    shape = deficit_shape_from_string(shape_name);
  } catch (const PreconditionError& e) {
    throw SchemaError(join(path, "shape"), e.what());
  }
  try {
    if (shape == DeficitShape::tabulated) {
      return DeficitTerm::tabulated(as_numbers(require(node, path, "s"), join(path, "s")),
                                    as_numbers(require(node, path, "values"), join(path, "values")));
    }
    const double amp = as_number(require(node, path, "amplitude"), join(path, "amplitude"));
    const double lo = as_number(require(node, path, "lo"), join(path, "lo"));
    const double hi = as_number(require(node, path, "hi"), join(path, "hi"));
    switch (shape) {
      case DeficitShape::indicator: {
        double w = 0.0;
        optional_field(node, path, "width", w, as_number);
        return DeficitTerm::indicator(amp, lo, hi, w);
      }
      case DeficitShape::raised_cosine: {
        double w = 0.5 * (hi - lo);
        optional_field(node, path, "width", w, as_number);
        return DeficitTerm::raised_cosine(amp, lo, hi, w);
      }
      case DeficitShape::gaussian:
        return DeficitTerm::gaussian(amp, lo, hi,
                                     as_number(require(node, path, "width"), join(path, "width")));
      default: break;
    }
  } catch (const PreconditionError& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(join(path, "shape"), "unsupported shape '" + shape_name + "'");
}

Deficit parse_deficit(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw SchemaError(path, "expected a list of terms");
  std::vector<DeficitTerm> terms;
  for (std::size_t i = 0; i < node.size(); ++i)
    terms.push_back(parse_term(node[i], path + "[" + std::to_string(i) + "]"));
  return Deficit(std::move(terms));
}

ShearProfile parse_profile(const YAML::Node& node, Command command) {
  const std::string path = "profile";
  check_keys(node, path, {"kind", "beta", "alpha", "c1", "c2", "deficit"});
  const auto kind_name = as_string(require(node, path, "kind"), "profile.kind");
  ProfileKind kind;
  try {
    kind = profile_kind_from_string(kind_name);
  } catch (const PreconditionError& e) {
    throw SchemaError("profile.kind", e.what());
  }
  if (kind == ProfileKind::linear_unbounded) return ShearProfile::linear_unbounded();
  const double beta = as_number(require(node, path, "beta"), "profile.beta");
  if (kind == ProfileKind::constant) return ShearProfile::constant(beta);
  const Deficit deficit = parse_deficit(require(node, path, "deficit"), "profile.deficit");
  if (kind == ProfileKind::bump) return ShearProfile::bump(beta, deficit);
  // schema
  double alpha = 1.0;
  if (command == Command::bracket)
    optional_field(node, path, "alpha", alpha, as_number);
  else
    alpha = as_number(require(node, path, "alpha"), "profile.alpha");
  const double c1 = as_number(require(node, path, "c1"), "profile.c1");
  const double c2 = as_number(require(node, path, "c2"), "profile.c2");
  try {
    return ShearProfile::schema(alpha, beta, deficit, c1, c2);
  } catch (const PreconditionError& e) {
    throw SchemaError("profile", e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& yaml_text, std::optional<Command> command_override) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw SchemaError("<root>", std::string("YAML parse error: ") + e.what());
  }
  if (!root || root.IsNull()) throw SchemaError("<root>", "empty scenario");
  check_keys(root, "", {"command", "seed", "profile", "geometry", "mesh", "ladder", "solver",
                        "dispersion", "hardy", "certify", "bracket", "identity", "volume",
                        "output"});
  Scenario sc;
  if (root["command"]) {
    sc.command = command_from_string(as_string(root["command"], "command"));
    if (command_override && *command_override != sc.command)
      throw SchemaError("command", "file says '" + to_string(sc.command) +
                                       "' but the command line says '" +
                                       to_string(*command_override) + "'");
  } else if (command_override) {
    sc.command = *command_override;
  } else {
    throw SchemaError("command", "missing required field");
  }
  const Command cmd = sc.command;

  if (root["seed"]) {
    const double s = as_number(root["seed"], "seed");
    if (s < 0 || s != std::floor(s)) throw SchemaError("seed", "expected a non-negative integer");
    sc.seed = static_cast<std::uint64_t>(s);
  }

  sc.profile = parse_profile(require(root, "", "profile"), cmd);

  const YAML::Node geo = require(root, "", "geometry");
  check_keys(geo, "geometry", {"d", "L"});
  sc.d = as_number(require(geo, "geometry", "d"), "geometry.d");
  positive(sc.d, "geometry.d");
  if (geo["L"]) {
    sc.L = as_number(geo["L"], "geometry.L");
    positive(*sc.L, "geometry.L");
  }

  if (const YAML::Node m = root["mesh"]) {
    check_keys(m, "mesh", {"n_s", "n_t", "end_bc"});
    MeshSpec spec;
    spec.n_s = as_int(require(m, "mesh", "n_s"), "mesh.n_s");
    spec.n_t = as_int(require(m, "mesh", "n_t"), "mesh.n_t");
    at_least(spec.n_s, 2, "mesh.n_s");
    at_least(spec.n_t, 2, "mesh.n_t");
    if (m["end_bc"]) {
      const auto bc = as_string(m["end_bc"], "mesh.end_bc");
      if (bc == "dirichlet") spec.end_bc = BoundaryTag::dirichlet;
      else if (bc == "neumann") spec.end_bc = BoundaryTag::neumann;
      else throw SchemaError("mesh.end_bc", "expected dirichlet or neumann");
    }
    sc.mesh = spec;
  }

  if (const YAML::Node lad = root["ladder"]) {
    if (!lad.IsSequence()) throw SchemaError("ladder", "expected a list of rungs");
    for (std::size_t i = 0; i < lad.size(); ++i) {
      const std::string p = "ladder[" + std::to_string(i) + "]";
      check_keys(lad[i], p, {"L", "n_s", "n_t"});
      Rung r;
      r.L = as_number(require(lad[i], p, "L"), p + ".L");
      r.n_s = as_int(require(lad[i], p, "n_s"), p + ".n_s");
      r.n_t = as_int(require(lad[i], p, "n_t"), p + ".n_t");
      positive(r.L, p + ".L");
      at_least(r.n_s, 2, p + ".n_s");
      at_least(r.n_t, 2, p + ".n_t");
      sc.ladder.push_back(r);
    }
  }

  if (const YAML::Node s = root["solver"]) {
    check_keys(s, "solver", {"k", "tol", "shift", "max_iter", "ncv"});
    optional_field(s, "solver", "k", sc.solver.k, as_int);
    optional_field(s, "solver", "tol", sc.solver.tol, as_number);
    optional_field(s, "solver", "max_iter", sc.solver.max_iter, as_int);
    optional_field(s, "solver", "ncv", sc.solver.ncv, as_int);
    if (s["shift"]) sc.solver.shift = as_number(s["shift"], "solver.shift");
    try {
      sc.solver.validate();
    } catch (const PreconditionError& e) {
      throw SchemaError("solver", e.what());
    }
  }

  if (const YAML::Node n = root["dispersion"]) {
    check_keys(n, "dispersion", {"xi_min", "xi_max", "points", "bands", "n_t"});
    auto& sp = sc.dispersion;
    optional_field(n, "dispersion", "xi_min", sp.xi_min, as_number);
    optional_field(n, "dispersion", "xi_max", sp.xi_max, as_number);
    optional_field(n, "dispersion", "points", sp.points, as_int);
    optional_field(n, "dispersion", "bands", sp.bands, as_int);
    optional_field(n, "dispersion", "n_t", sp.n_t, as_int);
    at_least(sp.points, 1, "dispersion.points");
    at_least(sp.bands, 1, "dispersion.bands");
    at_least(sp.n_t, 2, "dispersion.n_t");
    if (sp.xi_max < sp.xi_min) throw SchemaError("dispersion.xi_max", "must be >= xi_min");
  }

  if (const YAML::Node n = root["hardy"]) {
    check_keys(n, "hardy", {"s0", "b", "n_s", "n_t", "trials", "tol", "c_scale", "delta", "L",
                            "strip_n_s", "strip_n_t"});
    auto& sp = sc.hardy;
    sp.s0 = as_number(require(n, "hardy", "s0"), "hardy.s0");
    sp.b = as_number(require(n, "hardy", "b"), "hardy.b");
    positive(sp.b, "hardy.b");
    optional_field(n, "hardy", "n_s", sp.n_s, as_int);
    optional_field(n, "hardy", "n_t", sp.n_t, as_int);
    optional_field(n, "hardy", "trials", sp.trials, as_int);
    optional_field(n, "hardy", "tol", sp.tol, as_number);
    optional_field(n, "hardy", "c_scale", sp.c_scale, as_number);
    optional_field(n, "hardy", "delta", sp.delta, as_number);
    optional_field(n, "hardy", "L", sp.L, as_number);
    optional_field(n, "hardy", "strip_n_s", sp.strip_n_s, as_int);
    optional_field(n, "hardy", "strip_n_t", sp.strip_n_t, as_int);
    at_least(sp.n_s, 2, "hardy.n_s");
    at_least(sp.n_t, 2, "hardy.n_t");
    at_least(sp.trials, 0, "hardy.trials");
    at_least(sp.strip_n_s, 2, "hardy.strip_n_s");
    at_least(sp.strip_n_t, 2, "hardy.strip_n_t");
    positive(sp.L, "hardy.L");
    if (sp.delta < 0.0 || sp.delta > 1.0) throw SchemaError("hardy.delta", "must lie in [0, 1]");
  } else if (cmd == Command::hardy) {
    throw SchemaError("hardy", "missing required field");
  }

  if (const YAML::Node n = root["certify"]) {
    check_keys(n, "certify", {"condition", "n", "n_grid", "delta_grid", "cross_check"});
    auto& sp = sc.certify;
    optional_field(n, "certify", "condition", sp.condition, as_string);
    if (sp.condition != "auto" && sp.condition != "i" && sp.condition != "ii")
      throw SchemaError("certify.condition", "expected auto, i or ii");
    optional_field(n, "certify", "n", sp.n, as_number);
    positive(sp.n, "certify.n");
    optional_field(n, "certify", "n_grid", sp.n_grid, as_numbers);
    optional_field(n, "certify", "delta_grid", sp.delta_grid, as_numbers);
    optional_field(n, "certify", "cross_check", sp.cross_check, as_bool);
  }

  if (const YAML::Node n = root["bracket"]) {
    check_keys(n, "bracket", {"alpha_grid", "n_verge", "n_triangle", "L", "n_s", "n_t"});
    auto& sp = sc.bracket;
    sp.alpha_grid = as_numbers(require(n, "bracket", "alpha_grid"), "bracket.alpha_grid");
    if (sp.alpha_grid.empty()) throw SchemaError("bracket.alpha_grid", "must not be empty");
    optional_field(n, "bracket", "n_verge", sp.n_verge, as_int);
    optional_field(n, "bracket", "n_triangle", sp.n_triangle, as_int);
    optional_field(n, "bracket", "L", sp.L, as_number);
    optional_field(n, "bracket", "n_s", sp.n_s, as_int);
    optional_field(n, "bracket", "n_t", sp.n_t, as_int);
    at_least(sp.n_verge, 2, "bracket.n_verge");
    at_least(sp.n_triangle, 2, "bracket.n_triangle");
    at_least(sp.n_s, 2, "bracket.n_s");
    at_least(sp.n_t, 2, "bracket.n_t");
    positive(sp.L, "bracket.L");
  } else if (cmd == Command::bracket) {
    throw SchemaError("bracket", "missing required field");
  }

  if (const YAML::Node n = root["identity"]) {
    check_keys(n, "identity", {"trials", "s_lo", "s_hi", "n_bumps", "n_modes", "tol", "hardy_s0",
                               "hardy_gap", "hardy_tol"});
    auto& sp = sc.identity;
    optional_field(n, "identity", "trials", sp.trials, as_int);
    optional_field(n, "identity", "s_lo", sp.s_lo, as_number);
    optional_field(n, "identity", "s_hi", sp.s_hi, as_number);
    optional_field(n, "identity", "n_bumps", sp.n_bumps, as_int);
    optional_field(n, "identity", "n_modes", sp.n_modes, as_int);
    optional_field(n, "identity", "tol", sp.tol, as_number);
    if (n["hardy_s0"]) sp.hardy_s0 = as_number(n["hardy_s0"], "identity.hardy_s0");
    optional_field(n, "identity", "hardy_gap", sp.hardy_gap, as_number);
    optional_field(n, "identity", "hardy_tol", sp.hardy_tol, as_number);
    at_least(sp.trials, 1, "identity.trials");
    at_least(sp.n_bumps, 1, "identity.n_bumps");
    at_least(sp.n_modes, 1, "identity.n_modes");
    if (!(sp.s_hi > sp.s_lo)) throw SchemaError("identity.s_hi", "must exceed s_lo");
    positive(sp.hardy_gap, "identity.hardy_gap");
  }

  if (const YAML::Node n = root["volume"]) {
    check_keys(n, "volume", {"centers", "radius", "samples"});
    auto& sp = sc.volume;
    optional_field(n, "volume", "centers", sp.centers, as_numbers);
    optional_field(n, "volume", "radius", sp.radius, as_number);
    if (n["samples"]) {
      const double v = as_number(n["samples"], "volume.samples");
      if (v < 1 || v != std::floor(v)) throw SchemaError("volume.samples", "expected a positive integer");
      sp.samples = static_cast<std::int64_t>(v);
    }
    positive(sp.radius, "volume.radius");
    if (sp.centers.empty()) throw SchemaError("volume.centers", "must not be empty");
  }

  if (const YAML::Node n = root["output"]) {
    check_keys(n, "output", {"dir", "plotdata"});
    optional_field(n, "output", "dir", sc.out_dir, as_string);
    optional_field(n, "output", "plotdata", sc.plotdata, as_bool);
  }

  // Command-specific requirements.
  const bool infinite = sc.profile.infinite_beta();
  switch (cmd) {
    case Command::spectrum:
      if (sc.ladder.empty()) {
        if (!sc.L) throw SchemaError("geometry.L", "missing required field");
        if (!sc.mesh) throw SchemaError("mesh", "missing required field");
      }
      break;
    case Command::dispersion:
      if (sc.profile.kind != ProfileKind::constant)
        throw SchemaError("profile.kind", "dispersion needs a constant profile");
      break;
    case Command::hardy:
    case Command::identity_check:
      if (infinite) throw SchemaError("profile.kind", "needs a finite beta");
      break;
    case Command::certify:
      if (infinite) throw SchemaError("profile.kind", "needs a finite beta");
      if (sc.profile.kind != ProfileKind::bump && sc.profile.kind != ProfileKind::schema)
        throw SchemaError("profile.kind", "certify needs a deficit (bump or schema)");
      break;
    case Command::bracket:
      if (sc.profile.kind != ProfileKind::schema)
        throw SchemaError("profile.kind", "bracket needs a schema profile");
      break;
    case Command::probe_volume: break;
  }
  if (sc.L) {
    try {
      StripGeometry{sc.d, *sc.L}.validate(sc.profile);
    } catch (const PreconditionError& e) {
      throw SchemaError("geometry.L", e.what());
    }
  }

  YAML::Emitter echo;
  echo << root;
  sc.source_yaml = echo.c_str();
  return sc;
}

Scenario load_scenario(const std::string& path, std::optional<Command> command_override) {
  std::ifstream in(path);
  if (!in) throw SchemaError("<file>", "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), command_override);
}

}  // namespace shearspec
