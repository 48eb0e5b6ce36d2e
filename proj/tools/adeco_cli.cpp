#include <iostream>

#include <CLI11.hpp>

#include "adeco/cli.hpp"

int main(int argc, char** argv) {
  adeco::cli::CommandSpec spec;
  CLI::App app{"Adiabatic decoherence of spin pairs in a phonon bath"};
  app.require_subcommand(1);

  auto add_config = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--config", spec.config_path, "key = value configuration file");
    if (required) opt->required();
    sub->add_option("--out", spec.out_path, "output file (default stdout)");
  };

  auto* constants = app.add_subcommand("constants", "rate constants and decay times");
  add_config(constants, true);

  auto* evolve = app.add_subcommand("evolve", "reduced pair matrix on a time grid");
  add_config(evolve, true);
  evolve->add_option("--mode", spec.mode, "free | me")->check(CLI::IsMember({"free", "me"}));
  evolve->add_flag("--exact-path", spec.exact_path, "keep the thermal decay, nuD phase and X' average");
  evolve->add_option("--grid", spec.grid, "times in seconds, start:stop:steps");

  auto* sweep = app.add_subcommand("sweep", "tau_X over a grid of sample sizes and sound speeds");
  add_config(sweep, true);
  sweep->add_option("--n-grid", spec.n_grid, "pair counts, start:stop:steps (geometric)");
  sweep->add_option("--vs-grid", spec.vs_grid, "sound speeds in m/s, start:stop:steps");

  auto* oracle = app.add_subcommand("oracle", "brute-force verification suites");
  add_config(oracle, false);
  oracle->add_option("which", spec.oracle, "fock | eigdist | ksum | all")
      ->check(CLI::IsMember({"fock", "eigdist", "ksum", "all"}));
  oracle->add_option("--tol", spec.tol, "relative tolerance of the Fock comparison");

  auto* compare = app.add_subcommand("compare", "echo decay times against measured values");
  add_config(compare, true);
  compare->add_option("csv", spec.csv_path, "CSV with header nu_hat_khz,tau_exp_us")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : adeco::cli::kUsage;
  }
  spec.subcommand = app.get_subcommands().front()->get_name();
  return adeco::cli::run(spec, std::cout, std::cerr);
}
