#pragma once

#include <vector>

#include "edsense/hypothesis.hpp"
#include "edsense/traffic.hpp"

namespace edsense {

/// Sensing window and detector setup. The received SNR is kept in dB; the
/// linear value comes only from snr_linear().
struct SensingConfig {
  int samples = 20;          // I
  double sample_ms = 1.0;    // t_s
  double snr_db = -5.0;      // gamma_p in dB
  int max_changes = 0;       // N
  WeightMode mode = WeightMode::renewal;

  double snr_linear() const noexcept;
  double window_ms() const noexcept { return samples * sample_ms; }
  void validate() const;

  friend bool operator==(const SensingConfig&, const SensingConfig&) = default;
};

struct Moments {
  double mean;
  double variance;
};

struct OperatingPoint {
  double eta;
  double pfa;
  double pd;
};

struct RocCurve {
  std::vector<OperatingPoint> points;  // descending eta
  SensingConfig sensing;
  TrafficModel traffic;
};

/// Gaussian moments of the energy statistic when b of the I samples carry
/// signal: mean I + b gamma, variance 2I + 4b gamma.
Moments cond_stats(int busy, int samples, double gamma_p);

/// P(Y > eta) under the Gaussian approximation.
double cond_prob_exceed(double eta, double mean, double variance);

/// P(Y > eta) under the exact law of Y: noncentral chi-square with I degrees
/// of freedom and noncentrality b gamma. This is what full-sample simulation
/// draws from, so it is the reference for that mode.
double exact_prob_exceed(double eta, int busy, int samples, double gamma_p);

double uncond_pfa(double eta, const WeightTable& idle_table, const SensingConfig& config);
double uncond_pd(double eta, const WeightTable& busy_table, const SensingConfig& config);

/// Both weight tables for a configuration, plus per-busy-count marginals so
/// that averaging over a threshold costs O(I).
class SensingAnalysis {
 public:
  SensingAnalysis(const TrafficModel& model, const SensingConfig& config);

  const SensingConfig& config() const noexcept { return config_; }
  const TrafficModel& traffic() const noexcept { return model_; }
  const WeightTables& tables() const noexcept { return tables_; }

  double pfa(double eta) const;
  double pd(double eta) const;
  OperatingPoint at(double eta) const { return {eta, pfa(eta), pd(eta)}; }

  /// Same averages with the exact chi-square law in place of the Gaussian one.
  double exact_pfa(double eta) const;
  double exact_pd(double eta) const;

  /// [min mean - 10 max sd, max mean + 10 max sd] over busy counts that carry
  /// weight in the detection table.
  std::pair<double, double> threshold_bracket() const;

  /// Threshold where the averaged detection probability equals target_pd.
  OperatingPoint np_threshold(double target_pd) const;

 private:
  TrafficModel model_;
  SensingConfig config_;
  WeightTables tables_;
  std::vector<double> idle_marginal_;
  std::vector<double> busy_marginal_;
};

OperatingPoint np_threshold(const TrafficModel& model, const SensingConfig& config,
                            double target_pd);

/// `points` thresholds evenly spaced from mean+span*sd of the all-busy class
/// down to mean-span*sd of the noise-only class.
std::vector<double> default_eta_grid(const SensingConfig& config, int points = 201,
                                     double span_sigma = 6.0);

/// ROC over a descending threshold grid; thresholds are evaluated in parallel.
RocCurve roc(const TrafficModel& model, const SensingConfig& config,
             const std::vector<double>& eta_grid);
/// Single-threaded reference for roc().
RocCurve roc_serial(const TrafficModel& model, const SensingConfig& config,
                    const std::vector<double>& eta_grid);

/// Achievable secondary throughput in bits/s/Hz for a frame of T ms whose
/// first tau ms are spent sensing. tau must equal I * t_s.
double throughput(const TrafficModel& model, const SensingConfig& config, double frame_ms,
                  double tau_ms, double gamma_s, double eta);
double throughput(const SensingAnalysis& analysis, double frame_ms, double tau_ms, double gamma_s,
                  double eta);

}  // namespace edsense
