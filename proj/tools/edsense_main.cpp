// Command-line runner for the sensing experiments.
//
//   edsense <roc|threshold|models|validate|throughput> --config exp.json
//           [--out path] [--seed n] [--threads n]

#include <cstdint>
#include <iostream>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "edsense/cli/commands.hpp"

int main(int argc, char** argv) {
  using edsense::cli::CommandOptions;

  CLI::App app{"Energy-detector sensing performance under multi-change primary traffic"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;

  const char* descriptions[][2] = {
      {"roc", "ROC curves, one file per N"},
      {"threshold", "Neyman-Pearson thresholds over an SNR sweep"},
      {"models", "ROC per holding-time model at a common mean"},
      {"validate", "analytic values against Monte Carlo"},
      {"throughput", "secondary throughput over a sensing-time grid"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment file (JSON)")->required();
    sub->add_option("--out", out, "output CSV path (overrides 'output')");
    sub->add_option("--seed", seed, "Monte Carlo seed (overrides validate.seed)");
    sub->add_option("--threads", threads, "OpenMP thread count")->check(CLI::PositiveNumber);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return edsense::cli::kExitConfig;
  }

  CommandOptions options;
  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    if (sub->count("--out")) options.out = out;
    if (sub->count("--seed")) options.seed = seed;
    if (sub->count("--threads")) omp_set_num_threads(threads);
    return edsense::cli::run_command(sub->get_name(), config_path, options, std::cerr);
  }
  return edsense::cli::kExitConfig;
}
