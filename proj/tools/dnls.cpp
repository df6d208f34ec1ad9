// dnls: batch front end for the lattice toolkit.
//
//   dnls <command> --config <path> [--out <dir>] [--k <int>] [--sign <+|->] [--reverse]
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dnls/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Periodic DNLS lattice: spectra, stability, bifurcations and branches"};
  app.require_subcommand(1, 1);

  std::string config;
  std::optional<std::string> out;
  std::optional<int> k;
  std::optional<std::string> sign;
  bool reverse = false;

  const char* commands[][2] = {
      {"spectrum", "Block data and dense eigenvalues at one amplitude"},
      {"stability", "Stability verdicts over an amplitude sweep"},
      {"thresholds", "Amplitudes where phi_k reaches 1 and gamma_k"},
      {"bifurcations", "Onset frequencies with case labels and flags"},
      {"continue", "Pseudo-arclength continuation of one branch"},
      {"verify", "Time-integration checks of the first branch points"},
      {"simulate", "Implicit-midpoint trajectory from a perturbed standing wave"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Run configuration (JSON)")->required();
    sub->add_option("--out", out, "Output directory (overrides the config)");
    sub->add_option("--k", k, "Mode index k (overrides the config)");
    sub->add_option("--sign", sign, "Branch sign")->check(CLI::IsMember({"+", "-"}));
    sub->add_flag("--reverse", reverse, "Opposite traveling direction (k -> n-k)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  dnls::io::Overrides overrides;
  overrides.out = out;
  overrides.k = k;
  if (sign) overrides.sign = *sign == "+" ? +1 : -1;
  overrides.reverse = reverse;
  const std::string command = app.get_subcommands().front()->get_name();
  return dnls::io::run(command, config, overrides, std::cout, std::cerr);
}
