#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "edsense/cli/config.hpp"

namespace edsense::cli {

/// Process exit codes; part of the command-line contract.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidationMismatch = 1,
  kExitConfig = 2,
  kExitConvergence = 3,
  kExitEstimation = 4,
};

struct CommandOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
};

/// One ROC file per N: columns eta,pfa,pd,N.
int cmd_roc(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
/// Neyman-Pearson thresholds over SNR and N: columns snr_db,N,eta,pfa,pd,status.
int cmd_threshold(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
/// ROC per traffic model at a common mean: columns model,eta,pfa,pd,N.
int cmd_models(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
/// Analytic vs Monte Carlo (surrogate and full-sample) per threshold.
int cmd_validate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log);
/// Throughput over a sensing-time grid: columns tau_ms,eta,R.
int cmd_throughput(const ExperimentConfig& config, const CommandOptions& options,
                   std::ostream& log);

/// Loads the config, dispatches by name and maps failures to exit codes.
int run_command(std::string_view name, const std::filesystem::path& config_path,
                const CommandOptions& options, std::ostream& log);

/// Output file for one N of a multi-N ROC sweep: stem_N<n>.ext.
std::filesystem::path per_n_path(const std::filesystem::path& base, int n);

}  // namespace edsense::cli
