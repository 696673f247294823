// Command-line front end: radial, grid, distribution and verify.
#include <iostream>

#include "CLI11.hpp"
#include "bangbang/cli/commands.hpp"

int main(int argc, char** argv) {
  namespace cli = bangbang::cli;

  CLI::App app{"Optimal multi-material conductivity designs"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";
  int samples = 0;
  std::uint64_t seed = 1;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config, "JSON problem configuration");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--samples", samples, "Curve sample count (overrides solver.sample_count)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for randomized certificate sampling")->capture_default_str();
  };
  add_common(app.add_subcommand("radial", "Closed-form design on a ball"), true);
  add_common(app.add_subcommand("grid", "Finite-difference saddle iteration on a 2D grid"), true);
  add_common(app.add_subcommand("distribution", "Distribution function of psi on a ball"), true);
  add_common(app.add_subcommand("verify", "Re-check the outputs in --out without solving again"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  cli::CommandLine cl;
  cl.command = app.get_subcommands().front()->get_name();
  cl.config = config;
  cl.options.out_dir = out_dir;
  if (samples > 0) cl.options.samples = samples;
  cl.options.seed = seed;
  return cli::run_command(cl, std::cout, std::cerr);
}
