#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shearspec/eigensolve.hpp"
#include "shearspec/geometry.hpp"
#include "shearspec/mesh.hpp"
#include "shearspec/spectra.hpp"

namespace shearspec {

enum class Command { spectrum, dispersion, hardy, certify, bracket, identity_check, probe_volume };

std::string to_string(Command c);
/// Throws SchemaError("command", ...) for unknown names.
Command command_from_string(const std::string& name);

struct MeshSpec {
  int n_s = 0;
  int n_t = 0;
  BoundaryTag end_bc = BoundaryTag::dirichlet;
};

struct DispersionSpec {
  double xi_min = -4.0;
  double xi_max = 4.0;
  int points = 17;
  int bands = 3;
  int n_t = 400;
};

struct HardySpec {
  double s0 = 0.0;
  double b = 1.0;
  int n_s = 40;        // lambda_I mesh
  int n_t = 40;
  int trials = 200;
  double tol = 1e-7;
  double c_scale = 1.0;
  double delta = 0.0;
  double L = 20.0;     // spectral check strip
  int strip_n_s = 400;
  int strip_n_t = 24;
};

struct CertifySpec {
  /// "auto" picks i when int(eps^2 + 2 beta eps) < 0 and ii when it vanishes.
  std::string condition = "auto";
  double n = 3.0;
  std::vector<double> n_grid;
  std::vector<double> delta_grid;
  /// Cross-check on a truncated strip when geometry.L and mesh are given.
  bool cross_check = true;
};

struct BracketSpec {
  std::vector<double> alpha_grid;
  int n_verge = 48;
  int n_triangle = 48;
  double L = 8.0;
  int n_s = 1600;
  int n_t = 16;
};

struct IdentitySpec {
  int trials = 20;
  double s_lo = -3.0;
  double s_hi = 3.0;
  int n_bumps = 3;
  int n_modes = 3;
  double tol = 1e-8;
  /// 1-D Hardy check around s0 with bumps kept `gap` away; off when unset.
  std::optional<double> hardy_s0;
  double hardy_gap = 0.5;
  double hardy_tol = 1e-10;
};

struct VolumeSpec {
  std::vector<double> centers{10.0, 20.0, 40.0};
  double radius = 1.0;
  std::int64_t samples = 1'000'000;
};

struct Scenario {
  Command command = Command::spectrum;
  ShearProfile profile;
  /// geometry.L is optional for commands that never truncate.
  double d = 1.0;
  std::optional<double> L;
  std::optional<MeshSpec> mesh;
  std::vector<Rung> ladder;
  EigOptions solver;
  DispersionSpec dispersion;
  HardySpec hardy;
  CertifySpec certify;
  BracketSpec bracket;
  IdentitySpec identity;
  VolumeSpec volume;
  std::string out_dir = "out";
  bool plotdata = true;
  std::uint64_t seed = 1;
  /// The parsed document, echoed into the report.
  std::string source_yaml;
};

/// Parses and validates a scenario. Every violation is reported as a
/// SchemaError naming the dotted field path (e.g. "geometry.d"). When the
/// document has no `command` key, `command_override` supplies it; when both
/// are present they must agree.
Scenario parse_scenario(const std::string& yaml_text,
                        std::optional<Command> command_override = std::nullopt);
Scenario load_scenario(const std::string& path,
                       std::optional<Command> command_override = std::nullopt);

/// Numbers may be given as plain numbers or as "pi", "k*pi", "pi/k", "k*pi/m".
double parse_number_with_pi(const std::string& text);

}  // namespace shearspec
