#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shearspec/scenario.hpp"
#include "shearspec/serialize.hpp"

namespace shearspec {

inline constexpr const char* kVersion = "0.1.0";

struct RunReport {
  std::string command;
  std::string version = kVersion;
  /// command, seed, profile, d, L and the scenario document.
  Json scenario;
  /// Wall-clock seconds per stage, in execution order.
  std::vector<std::pair<std::string, double>> timings;
  Json results = Json::object();
  std::vector<std::string> warnings;
  /// Set by commands that produce a verdict (hardy, certify, bracket,
  /// identity-check).
  std::optional<bool> verdict;
  std::optional<std::string> error;
};

void to_json(Json& j, const RunReport& r);
void from_json(const Json& j, RunReport& r);

struct RunOutput {
  RunReport report;
  /// Data files (name -> contents), written next to report.json.
  std::map<std::string, std::string> files;
};

/// Runs the pipeline of a validated scenario without touching the file
/// system. Computational errors propagate as exceptions.
RunOutput execute(const Scenario& scenario, int jobs = 1);

struct RunOptions {
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

/// Loads, validates and executes a scenario, then writes report.json,
/// timings.json, the CSV data files and (optionally) plot data into the
/// output directory. Returns 0 on success, 2 when a demanded verdict is
/// false and 1 on any error; diagnostics go to `log`.
int run(Command command, const std::string& config_path, const RunOptions& options,
        std::ostream& log);

}  // namespace shearspec
