#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shearspec/error.hpp"
#include "shearspec/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of sheared strips"};
  app.set_version_flag("--version", std::string(shearspec::kVersion));
  app.require_subcommand(1);

  std::string config;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string out_dir;

  const char* commands[][2] = {
      {"spectrum", "lowest eigenvalues on a truncated strip, convergence ladders"},
      {"dispersion", "fiber bands for constant shear"},
      {"hardy", "Hardy constants and their verification"},
      {"certify", "variational bound-state certificates"},
      {"bracket", "Neumann bracketing and the alpha0 search"},
      {"identity-check", "ground-state identity and 1-D Hardy margins"},
      {"probe-volume", "ball intersection areas far out along the strip"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "scenario file (YAML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--jobs", jobs, "parallel jobs for independent sub-tasks")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "overrides the scenario seed");
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  shearspec::RunOptions options;
  options.jobs = jobs;
  if (chosen->count("--seed") > 0) options.seed = seed;
  if (chosen->count("--out") > 0) options.out_dir = out_dir;
  try {
    return shearspec::run(shearspec::command_from_string(chosen->get_name()), config, options,
                          std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
