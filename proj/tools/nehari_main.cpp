#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nehari/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Least-energy solutions of coupled cubic Schrodinger systems "
               "under grouped Nehari constraints"};
  app.require_subcommand(1);

  std::string config, out = ".";
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--config", config, "configuration file")->required();
    if (with_out) sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "override solver.seed");
  };

  CLI::App* solve = app.add_subcommand("solve", "minimize the constrained energy");
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep of solves");
  CLI::App* constants = app.add_subcommand("constants", "print the admissibility constants");
  CLI::App* radial = app.add_subcommand("radial", "sub-system levels, decay and splitting");
  add_common(solve, true);
  add_common(sweep, true);
  add_common(constants, false);
  add_common(radial, true);

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) return nehari::cmd_solve(config, out, seed);
  if (sweep->parsed()) return nehari::cmd_sweep(config, out, seed);
  if (constants->parsed()) return nehari::cmd_constants(config);
  return nehari::cmd_radial(config, out, seed);
}
