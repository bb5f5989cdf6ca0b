#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rwsurf/cli.hpp"
#include "rwsurf/errors.hpp"

namespace {

void add_common(CLI::App* cmd, rwsurf::CliOptions& o, std::string& grid, std::string& checks) {
  cmd->add_option("--config", o.config, "run configuration (JSON)")->required();
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--grid", grid, "grid size NxM (at least 4x4)");
  cmd->add_option("--tol", o.tol, "override every tolerance");
  cmd->add_option("--perturb", o.perturb, "normal offset amplitude eps (phi + eps sin(u) e4)");
  cmd->add_option("--checks", checks, "comma-separated subset of checks");
  cmd->add_option("--seed", o.seed, "seed for randomized oracles");
  cmd->add_flag("--allow-constant-curvature", o.allow_constant_curvature,
                "accept RW0 families over a constant-curvature ambient");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surfaces with positive relative nullity in Robertson-Walker space-times"};
  app.require_subcommand(1);
  rwsurf::CliOptions opts;
  std::string grid, checks;

  auto* construct = app.add_subcommand("construct", "build a family and write its mesh");
  auto* verify = app.add_subcommand("verify", "run the checker battery and write a JSON report");
  auto* ambient = app.add_subcommand("ambient-check", "scan the ambient for constant curvature");
  for (auto* cmd : {construct, verify, ambient}) add_common(cmd, opts, grid, checks);
  verify->add_option("--mesh", opts.mesh, "verify a CSV mesh written by construct");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rwsurf::kExitInvalidConfig;
  }

  try {
    if (!grid.empty()) opts.grid = rwsurf::parse_grid(grid);
    if (!checks.empty()) {
      std::set<std::string> names;
      std::stringstream ss(checks);
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (!name.empty()) names.insert(name);
      }
      opts.checks = names;
    }
  } catch (const rwsurf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rwsurf::kExitInvalidConfig;
  }

  if (construct->parsed()) return rwsurf::cmd_construct(opts, std::cout, std::cerr);
  if (verify->parsed()) return rwsurf::cmd_verify(opts, std::cout, std::cerr);
  return rwsurf::cmd_ambient_check(opts, std::cout, std::cerr);
}
