#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edsense/detector.hpp"
#include "edsense/errors.hpp"
#include "edsense/montecarlo.hpp"
#include "edsense/traffic.hpp"

namespace edsense::cli {

/// Invalid experiment file. `key` is the dotted path of the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct LawSpec {
  HoldingKind kind = HoldingKind::exponential;
  double mean_ms = 5.0;
  std::optional<double> shape;

  HoldingDist build() const { return HoldingDist::from_mean(kind, mean_ms, shape); }
};

struct TrafficSpec {
  LawSpec idle;
  LawSpec busy;
  double p_busy = 0.5;

  TrafficModel build() const { return {idle.build(), busy.build(), p_busy}; }
};

/// Either an explicit list of thresholds or an evenly spaced default grid.
struct EtaGridSpec {
  std::vector<double> explicit_points;
  int points = 201;
  double span_sigma = 6.0;

  std::vector<double> build(const SensingConfig& sensing) const;
};

struct RocSpec {
  std::vector<int> n_list;  // empty: use sensing.N
  EtaGridSpec eta;
};

struct ThresholdSpec {
  double target_pd = 0.9;
  std::vector<double> snr_db;
  std::vector<int> n_list;
};

struct ModelsSpec {
  std::vector<HoldingKind> kinds;
  double mean_ms = 5.0;
  int n = 5;
  std::map<HoldingKind, double> shapes;
  EtaGridSpec eta;
  std::vector<std::string> warnings;

  double shape_for(HoldingKind kind) const;
};

struct ValidateSpec {
  std::uint64_t trials = 200000;
  std::optional<std::uint64_t> seed;
  EtaGridSpec eta{{}, 10, 1.5};
  mc::TraceClock clock = mc::TraceClock::lattice;
  double sigma_bound = 3.0;
  // Allowed |full-sample estimate - Gaussian average|. When unset, each
  // threshold gets |exact - Gaussian| + sigma_bound standard errors.
  std::optional<double> full_sample_budget;
};

struct ThroughputSpec {
  double frame_ms = 100.0;
  std::vector<double> tau_ms;
  double gamma_s = 10.0;
  double target_pd = 0.9;
};

struct ExperimentConfig {
  TrafficSpec traffic;
  SensingConfig sensing;
  std::optional<RocSpec> roc;
  std::optional<ThresholdSpec> threshold;
  std::optional<ModelsSpec> models;
  std::optional<ValidateSpec> validate;
  std::optional<ThroughputSpec> throughput;
  std::string output;
  nlohmann::json source;  // the document as read, used as the CSV fingerprint
};

/// Parses and validates every block; unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace edsense::cli
