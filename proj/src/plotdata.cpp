#include "shearspec/plotdata.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "shearspec/error.hpp"

namespace shearspec {

namespace {

constexpr int kBoundarySamples = 401;

std::ostringstream make_stream() {
  std::ostringstream s;
  s << std::setprecision(12);
  return s;
}

std::string boundary_data(const ShearProfile& profile, double d, double lo, double hi) {
  auto out = make_stream();
  out << "# x f(x) f(x)+d\n";
  for (int i = 0; i < kBoundarySamples; ++i) {
    const double x = lo + (hi - lo) * i / (kBoundarySamples - 1);
    const double f = eval_f(profile, x);
    out << x << ' ' << f << ' ' << f + d << '\n';
  }
  return out.str();
}

std::string separator_data(const SchemaGeometry& g) {
  auto out = make_stream();
  out << "# x_ext y_ext x_int y_int\n";
  out << "# O A (ext) | O B (int)\n";
  out << g.O.x() << ' ' << g.O.y() << ' ' << g.O.x() << ' ' << g.O.y() << '\n';
  out << g.A.x() << ' ' << g.A.y() << ' ' << g.B.x() << ' ' << g.B.y() << "\n\n\n";
  out << "# O' A' (ext) | O' B' (int)\n";
  out << g.O_prime.x() << ' ' << g.O_prime.y() << ' ' << g.O_prime.x() << ' ' << g.O_prime.y() << '\n';
  out << g.A_prime.x() << ' ' << g.A_prime.y() << ' ' << g.B_prime.x() << ' ' << g.B_prime.y() << '\n';
  return out.str();
}

std::string band_data(const DispersionCurve& c) {
  std::vector<std::size_t> order(c.xi_grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double a2 = c.xi_grid[a] * c.xi_grid[a];
    const double b2 = c.xi_grid[b] * c.xi_grid[b];
    return a2 < b2 || (a2 == b2 && c.xi_grid[a] < c.xi_grid[b]);
  });
  auto out = make_stream();
  for (int band = 0; band < c.bands(); ++band) {
    if (band > 0) out << "\n\n";
    out << "# band " << band + 1 << ": xi xi^2 analytic numeric\n";
    for (std::size_t i : order) {
      const auto row = static_cast<Eigen::Index>(i);
      out << c.xi_grid[i] << ' ' << c.xi_grid[i] * c.xi_grid[i] << ' ' << c.analytic(row, band)
          << ' ' << c.numeric(row, band) << '\n';
    }
  }
  return out.str();
}

std::string ladder_data(const SpectrumReport& r) {
  auto out = make_stream();
  out << "# index eigenvalue threshold\n";
  for (Eigen::Index i = 0; i < r.eig.values.size(); ++i) {
    out << i + 1 << ' ' << r.eig.values(i) << ' ';
    if (r.threshold)
      out << *r.threshold;
    else
      out << "nan";
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::map<std::string, std::string> plotdata_files(const RunReport& report) {
  std::map<std::string, std::string> files;
  const Json& sc = report.scenario;
  if (!sc.is_object() || !sc.contains("profile")) return files;
  ShearProfile profile = sc.at("profile").get<ShearProfile>();
  const double d = number_from_json(sc.at("d"));
  const Json& res = report.results;

  if (res.contains("alpha0")) {
    const Alpha0Result a0 = res.at("alpha0").get<Alpha0Result>();
    // Draw the decomposition for alpha0, else the last alpha with a schema.
    const Alpha0Entry* pick = nullptr;
    for (const auto& e : a0.entries) {
      if (!e.report) continue;
      if (a0.alpha0 && e.alpha == *a0.alpha0) {
        pick = &e;
        break;
      }
      pick = &e;
    }
    if (pick) {
      files["boundary.dat"] = boundary_data(pick->report->schema.profile, d, -1.0, 2.0);
      files["separators.dat"] = separator_data(pick->report->schema);
    }
  } else {
    double half = 10.0;
    if (!sc.at("L").is_null()) half = number_from_json(sc.at("L"));
    if (profile.kind == ProfileKind::schema) half = std::max(half, 2.0);
    files["boundary.dat"] = boundary_data(profile, d, -half, half);
  }

  if (res.contains("dispersion")) files["bands.dat"] = band_data(res.at("dispersion").get<DispersionCurve>());
  for (const char* key : {"spectrum", "cross_check"})
    if (res.contains(key)) files["ladder.dat"] = ladder_data(res.at(key).get<SpectrumReport>());
  if (res.contains("convergence")) {
    const ConvergenceTable t = res.at("convergence").get<ConvergenceTable>();
    auto out = make_stream();
    out << "# L lambda1\n";
    for (std::size_t i = 0; i < t.rungs.size(); ++i) out << t.rungs[i].L << ' ' << t.lambda1[i] << '\n';
    files["convergence.dat"] = out.str();
  }
  return files;
}

void emit_plotdata(const RunReport& report, const std::string& dir) {
  const auto files = plotdata_files(report);
  if (files.empty()) return;
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : files) {
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) throw Error("cannot write plot data '" + name + "'");
    out << contents;
  }
}

}  // namespace shearspec
