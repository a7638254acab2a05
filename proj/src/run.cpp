#include "shearspec/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "shearspec/bracketing.hpp"
#include "shearspec/error.hpp"
#include "shearspec/hardy.hpp"
#include "shearspec/plotdata.hpp"
#include "shearspec/spectra.hpp"
#include "shearspec/variational.hpp"

namespace shearspec {

void to_json(Json& j, const RunReport& r) {
  j = Json::object();
  j["command"] = r.command;
  j["version"] = r.version;
  j["scenario"] = r.scenario;
  if (!r.timings.empty()) {
    Json t = Json::array();
    for (const auto& [stage, seconds] : r.timings) t.push_back(Json{{"stage", stage}, {"seconds", seconds}});
    j["timings"] = t;
  }
  j["results"] = r.results;
  j["warnings"] = r.warnings;
  j["verdict"] = r.verdict ? Json(*r.verdict) : Json(nullptr);
  j["error"] = r.error ? Json(*r.error) : Json(nullptr);
}

void from_json(const Json& j, RunReport& r) {
  r = RunReport{};
  r.command = j.at("command").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.scenario = j.at("scenario");
  if (j.contains("timings"))
    for (const auto& t : j.at("timings"))
      r.timings.emplace_back(t.at("stage").get<std::string>(), t.at("seconds").get<double>());
  r.results = j.at("results");
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (!j.at("verdict").is_null()) r.verdict = j.at("verdict").get<bool>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
}

namespace {

class StageClock {
 public:
  explicit StageClock(RunReport& report) : report_(report) {}

  template <typename F>
  auto time(const std::string& stage, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      report_.timings.emplace_back(stage, dt.count());
    };
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      finish();
    } else {
      auto out = body();
      finish();
      return out;
    }
  }

 private:
  RunReport& report_;
};

std::string csv_number(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string eigenvalue_csv(const SpectrumReport& r) {
  std::ostringstream out;
  out << "index,eigenvalue,residual\n";
  for (Eigen::Index i = 0; i < r.eig.values.size(); ++i)
    out << i + 1 << ',' << csv_number(r.eig.values(i)) << ',' << csv_number(r.eig.residuals(i)) << '\n';
  return out.str();
}

SpectrumReport strip_spectrum(const Scenario& sc) {
  const MeshSpec& m = *sc.mesh;
  return truncated_spectrum(sc.profile, StripGeometry{sc.d, *sc.L}, m.n_s, m.n_t, m.end_bc,
                            sc.solver);
}

void run_spectrum(const Scenario& sc, int jobs, RunOutput& out, StageClock& clock) {
  if (sc.L && sc.mesh) {
    const SpectrumReport rep = clock.time("spectrum", [&] { return strip_spectrum(sc); });
    out.report.results["spectrum"] = rep;
    out.files["eigenvalues.csv"] = eigenvalue_csv(rep);
  }
  if (!sc.ladder.empty()) {
    const BoundaryTag bc = sc.mesh ? sc.mesh->end_bc : BoundaryTag::dirichlet;
    const ConvergenceTable table = clock.time("convergence", [&] {
      return convergence_study(sc.profile, sc.d, sc.ladder, bc, sc.solver, jobs);
    });
    out.report.results["convergence"] = table;
    std::ostringstream csv;
    csv << "L,n_s,n_t,lambda1\n";
    for (std::size_t i = 0; i < table.rungs.size(); ++i)
      csv << csv_number(table.rungs[i].L) << ',' << table.rungs[i].n_s << ',' << table.rungs[i].n_t
          << ',' << csv_number(table.lambda1[i]) << '\n';
    out.files["convergence.csv"] = csv.str();
    if (!table.nonincreasing) out.report.warnings.push_back("convergence ladder is not monotone");
  }
}

void run_dispersion(const Scenario& sc, int jobs, RunOutput& out, StageClock& clock) {
  const DispersionSpec& sp = sc.dispersion;
  std::vector<double> grid;
  for (int i = 0; i < sp.points; ++i)
    grid.push_back(sp.points == 1 ? sp.xi_min
                                  : sp.xi_min + (sp.xi_max - sp.xi_min) * i / (sp.points - 1));
  const DispersionCurve curve = clock.time("dispersion", [&] {
    return dispersion_curve(sc.profile.beta, sc.d, grid, sp.bands, sp.n_t, sc.solver, jobs);
  });
  out.report.results["dispersion"] = curve;
  out.report.results["max_relative_error"] = number_to_json(curve.max_relative_error());
  std::ostringstream csv;
  write_dispersion_csv(csv, curve);
  out.files["dispersion.csv"] = csv.str();
}

void run_hardy(const Scenario& sc, RunOutput& out, StageClock& clock) {
  const HardySpec& sp = sc.hardy;
  const HardyCertificate cert = clock.time("lambda_I", [&] {
    return hardy_constants(sc.profile, sc.d, sp.s0, sp.b, sp.n_s, sp.n_t);
  });
  VerifyHardyOptions vo;
  vo.tol = sp.tol;
  vo.c_scale = sp.c_scale;
  vo.delta = sp.delta;
  vo.seed = sc.seed;
  vo.L = sp.L;
  vo.n_s = sp.strip_n_s;
  vo.n_t = sp.strip_n_t;
  const VerifyHardyReport rep =
      clock.time("verify", [&] { return verify_hardy(cert, sc.profile, sp.trials, vo); });
  out.report.results["certificate"] = cert;
  out.report.results["verification"] = rep;
  out.report.verdict = rep.pass_a && rep.pass_b;
}

void run_certify(const Scenario& sc, RunOutput& out, StageClock& clock) {
  const CertifySpec& sp = sc.certify;
  std::string condition = sp.condition;
  if (condition == "auto") {
    const double integral = shear_integral(sc.profile);
    condition = std::abs(integral) <= 1e-10 ? "ii" : "i";
  }
  VariationalCertificate cert;
  if (condition == "i") {
    cert = clock.time("condition_i", [&] { return rayleigh_condition_i(sc.profile, sc.d, sp.n); });
  } else {
    ConditionIIOptions opts;
    opts.n_grid = sp.n_grid;
    opts.delta_grid = sp.delta_grid;
    cert = clock.time("condition_ii", [&] { return certify_condition_ii(sc.profile, sc.d, opts); });
  }
  out.report.results["certificate"] = cert;
  out.report.verdict = cert.verdict;
  if (sp.cross_check && sc.L && sc.mesh) {
    const SpectrumReport rep = clock.time("cross_check", [&] { return strip_spectrum(sc); });
    out.report.results["cross_check"] = rep;
    out.files["eigenvalues.csv"] = eigenvalue_csv(rep);
    if (cert.verdict && rep.count_below_threshold < 1)
      out.report.warnings.push_back(
          "certificate not confirmed: truncated spectrum has no eigenvalue below the threshold");
  }
}

void run_bracket(const Scenario& sc, int jobs, RunOutput& out, StageClock& clock) {
  const BracketSpec& sp = sc.bracket;
  BracketingOptions bo;
  bo.n_verge = sp.n_verge;
  bo.n_triangle = sp.n_triangle;
  bo.L = sp.L;
  bo.n_s = sp.n_s;
  bo.n_t = sp.n_t;
  bo.eig = sc.solver;
  const auto [c1, c2] = *sc.profile.bounds;
  const Alpha0Result res = clock.time("find_alpha0", [&] {
    return find_alpha0(sc.profile.beta, sc.d, sc.profile.deficit, c1, c2, sp.alpha_grid, bo, jobs);
  });
  out.report.results["alpha0"] = res;
  std::ostringstream csv;
  csv << "alpha,schema_defined,combined_min,strip_lambda1,count_below,qualifies\n";
  for (const auto& e : res.entries) {
    csv << csv_number(e.alpha) << ',' << (e.schema_defined ? 1 : 0) << ','
        << (e.report ? csv_number(e.report->combined_min) : "") << ',' << csv_number(e.strip_lambda1)
        << ',' << (e.count_below ? std::to_string(*e.count_below) : "") << ','
        << (e.qualifies ? 1 : 0) << '\n';
  }
  out.files["alpha0.csv"] = csv.str();
  out.report.verdict = res.alpha0.has_value() && res.soundness;
  if (!res.alpha0) out.report.warnings.push_back("alpha0 beyond grid");
  if (!res.soundness) out.report.warnings.push_back("bracketing lower bound exceeds the strip eigenvalue");
}

void run_identity(const Scenario& sc, RunOutput& out, StageClock& clock) {
  const IdentitySpec& sp = sc.identity;
  std::mt19937_64 rng(sc.seed);
  Json samples = Json::array();
  double worst = 0.0;
  clock.time("identity", [&] {
    for (int i = 0; i < sp.trials; ++i) {
      const TestFunction psi = random_modal(rng, sc.d, sp.s_lo, sp.s_hi, sp.n_bumps, sp.n_modes);
      const IdentityResidual r = ground_state_identity(sc.profile, sc.d, psi);
      worst = std::max(worst, r.residual);
      samples.push_back(Json{{"lhs", number_to_json(r.lhs)},
                             {"rhs", number_to_json(r.rhs)},
                             {"residual", number_to_json(r.residual)},
                             {"psi", describe(psi)}});
    }
  });
  out.report.results["identity"] = Json{{"samples", samples},
                                        {"max_residual", number_to_json(worst)},
                                        {"tol", number_to_json(sp.tol)}};
  bool ok = worst < sp.tol;
  if (sp.hardy_s0) {
    Json margins = Json::array();
    double min_margin = std::numeric_limits<double>::infinity();
    clock.time("one_d_hardy", [&] {
      const double reach = std::max(sp.s_hi - sp.s_lo, 2.0 * sp.hardy_gap);
      for (int i = 0; i < sp.trials; ++i) {
        const TestFunction psi = random_modal_avoiding(rng, sc.d, *sp.hardy_s0, sp.hardy_gap, reach,
                                                       sp.n_bumps, sp.n_modes);
        const OneDHardyMargin m = one_d_hardy_check(sc.profile, sc.d, *sp.hardy_s0, psi);
        min_margin = std::min(min_margin, m.margin);
        margins.push_back(Json{{"lhs", number_to_json(m.lhs)},
                               {"weighted", number_to_json(m.weighted)},
                               {"margin", number_to_json(m.margin)}});
      }
    });
    out.report.results["one_d_hardy"] = Json{{"samples", margins},
                                             {"min_margin", number_to_json(min_margin)},
                                             {"tol", number_to_json(sp.hardy_tol)}};
    ok = ok && min_margin >= -sp.hardy_tol;
  }
  out.report.verdict = ok;
}

void run_volume(const Scenario& sc, RunOutput& out, StageClock& clock) {
  const VolumeSpec& sp = sc.volume;
  std::mt19937_64 rng(sc.seed);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "x,area,std_error\n";
  std::vector<double> areas;
  clock.time("volume", [&] {
    for (double x : sp.centers) {
      const Eigen::Vector2d center(x, eval_f(sc.profile, x) + 0.5 * sc.d);
      const AreaEstimate a = ball_intersection_area(sc.profile, sc.d, center, sp.radius, rng, sp.samples);
      areas.push_back(a.area);
      rows.push_back(Json{{"x", number_to_json(x)},
                          {"area", number_to_json(a.area)},
                          {"std_error", number_to_json(a.std_error)},
                          {"samples", a.samples}});
      csv << csv_number(x) << ',' << csv_number(a.area) << ',' << csv_number(a.std_error) << '\n';
    }
  });
  bool decreasing = true;
  for (std::size_t i = 1; i < areas.size(); ++i) decreasing = decreasing && areas[i] < areas[i - 1];
  out.report.results["volume"] = Json{{"balls", rows}, {"radius", number_to_json(sp.radius)},
                                      {"decreasing", decreasing}};
  out.files["volume.csv"] = csv.str();
}

Json scenario_echo(const Scenario& sc) {
  Json j = Json::object();
  j["command"] = to_string(sc.command);
  j["seed"] = sc.seed;
  j["profile"] = sc.profile;
  j["d"] = number_to_json(sc.d);
  j["L"] = sc.L ? number_to_json(*sc.L) : Json(nullptr);
  j["document"] = sc.source_yaml;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw Error("cannot write '" + path.string() + "'");
}

}  // namespace

RunOutput execute(const Scenario& sc, int jobs) {
  RunOutput out;
  out.report.command = to_string(sc.command);
  out.report.scenario = scenario_echo(sc);
  StageClock clock(out.report);
  switch (sc.command) {
    case Command::spectrum: run_spectrum(sc, jobs, out, clock); break;
    case Command::dispersion: run_dispersion(sc, jobs, out, clock); break;
    case Command::hardy: run_hardy(sc, out, clock); break;
    case Command::certify: run_certify(sc, out, clock); break;
    case Command::bracket: run_bracket(sc, jobs, out, clock); break;
    case Command::identity_check: run_identity(sc, out, clock); break;
    case Command::probe_volume: run_volume(sc, out, clock); break;
  }
  return out;
}

int run(Command command, const std::string& config_path, const RunOptions& options,
        std::ostream& log) {
  Scenario sc;
  try {
    sc = load_scenario(config_path, command);
    if (options.seed) sc.seed = *options.seed;
    if (options.out_dir) sc.out_dir = *options.out_dir;
    if (options.jobs < 1) throw SchemaError("--jobs", "must be >= 1");
  } catch (const SchemaError& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }

  const std::filesystem::path dir(sc.out_dir);
  try {
    std::filesystem::create_directories(dir);
    const auto probe = dir / ".write-test";
    write_file(probe, "");
    std::filesystem::remove(probe);
  } catch (const std::exception& e) {
    log << "error: output.dir: not writable: " << e.what() << '\n';
    return 1;
  }

  RunOutput out;
  int code = 0;
  try {
    out = execute(sc, options.jobs);
    if (out.report.verdict && !*out.report.verdict) code = 2;
  } catch (const std::exception& e) {
    out.report.command = to_string(sc.command);
    out.report.scenario = scenario_echo(sc);
    out.report.error = e.what();
    log << "error: " << e.what() << '\n';
    code = 1;
  }

  try {
    RunReport stable = out.report;
    Json timings = Json::array();
    for (const auto& [stage, seconds] : stable.timings)
      timings.push_back(Json{{"stage", stage}, {"seconds", seconds}});
    stable.timings.clear();
    write_file(dir / "report.json", Json(stable).dump(2) + "\n");
    write_file(dir / "timings.json", timings.dump(2) + "\n");
    for (const auto& [name, contents] : out.files) write_file(dir / name, contents);
    if (sc.plotdata && !out.report.error) emit_plotdata(stable, (dir / "plot").string());
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  for (const auto& w : out.report.warnings) log << "warning: " << w << '\n';
  if (code == 2) log << "verdict: false\n";
  return code;
}

}  // namespace shearspec
