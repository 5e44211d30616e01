// Command line front end. All real work lives in pufqas/cli.hpp; this file
// only maps flags onto a RunConfig and exceptions onto exit codes.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pufqas/cli.hpp"

namespace {

struct RawArgs {
  std::string n_range;
  std::string m_range;
  std::string d_range;
  std::string source_text;
};

void add_grid_options(CLI::App& cmd, RawArgs& raw) {
  cmd.add_option("--n", raw.n_range, "input copies N (start:stop:step or list)");
  cmd.add_option("--clones", raw.m_range, "clone count M (start:stop:step or list)");
  cmd.add_option("--dim", raw.d_range, "Hilbert space dimension d (range or list)");
}

void add_protocol_options(CLI::App& cmd, pufqas::RunConfig& cfg, RawArgs& raw) {
  cmd.add_option("--rounds", cfg.rounds, "verification rounds per session");
  cmd.add_option("--epsilon", cfg.epsilon, "accepted fraction of failed outcomes");
  cmd.add_option("--eta", cfg.eta, "detector efficiency at the verifier");
  cmd.add_option("--source", raw.source_text, "photon source, fixed:N or poisson:MEAN");
}

void add_output_options(CLI::App& cmd, pufqas::RunConfig& cfg) {
  cmd.add_option("--format", cfg.format, "output format, csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--out", cfg.out_path, "write output to this file instead of stdout");
  cmd.add_option("--seed", cfg.seed, "base seed for all randomized work");
}

int dispatch(const pufqas::RunConfig& cfg) {
  try {
    return pufqas::run_config(cfg);
  } catch (const pufqas::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pufqas::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds, cloning checks and protocol simulation for "
               "unitary-challenge quantum authentication"};
  app.require_subcommand(1);

  pufqas::RunConfig cfg;
  RawArgs raw;

  CLI::App* bounds = app.add_subcommand(
      "bounds", "closed-form attack bounds over an (N, M, d) grid");
  add_grid_options(*bounds, raw);
  add_protocol_options(*bounds, cfg, raw);
  add_output_options(*bounds, cfg);
  bounds->add_option("--preset", cfg.preset, "built-in sweep instead of a grid")
      ->check(CLI::IsMember({"fig2a", "fig2b"}));

  CLI::App* sweep = app.add_subcommand(
      "sweep", "built-in fidelity sweeps across clone count or input copies");
  sweep->add_option("--preset", cfg.preset, "fig2a or fig2b")
      ->check(CLI::IsMember({"fig2a", "fig2b"}))
      ->required();
  add_output_options(*sweep, cfg);

  CLI::App* verify = app.add_subcommand(
      "verify-cloner", "Monte Carlo check of the cloner against the closed form");
  add_grid_options(*verify, raw);
  verify->add_option("--samples", cfg.samples, "random input states per grid point");
  add_output_options(*verify, cfg);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run the verification protocol against a prover strategy");
  add_grid_options(*simulate, raw);
  add_protocol_options(*simulate, cfg, raw);
  simulate->add_option("--trials", cfg.trials, "independent protocol sessions");
  simulate->add_option("--strategy", cfg.strategy,
                       "honest, random-key, estimation, uqcm-analytic or uqcm-exact")
      ->check(CLI::IsMember(
          {"honest", "random-key", "estimation", "uqcm-analytic", "uqcm-exact"}));
  add_output_options(*simulate, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pufqas::kExitUsage;
  }

  try {
    if (!raw.n_range.empty()) cfg.n_values = pufqas::parse_int_range(raw.n_range);
    if (!raw.m_range.empty()) cfg.m_values = pufqas::parse_int_range(raw.m_range);
    if (!raw.d_range.empty()) cfg.d_values = pufqas::parse_int_range(raw.d_range);
    if (!raw.source_text.empty()) cfg.source = pufqas::parse_source(raw.source_text);
  } catch (const pufqas::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pufqas::kExitUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return dispatch(cfg);
}
