#pragma once

#include <cstdint>
#include <vector>

#include "edsense/detector.hpp"
#include "edsense/rng.hpp"
#include "edsense/traffic.hpp"

namespace edsense::mc {

/// How simulated holding times become change samples.
///   lattice     each interval starts at the sample boundary of the previous
///               change and lasts ceil(duration / t_s) samples; the process
///               the renewal-mode weight table describes exactly.
///   continuous  durations accumulate in real time and each change time t
///               maps to sample ceil(t / t_s); two changes in one sample
///               make the trial unusable.
enum class TraceClock { lattice, continuous };

/// How the detector output is produced for a trace.
///   full_sample         Y = sum (s_i + n_i)^2 with n_i ~ N(0,1), s_i = sqrt(gamma_p) when busy
///   gaussian_surrogate  Y ~ Normal(cond_stats(b)), isolating the traffic combinatorics
enum class SimMode { full_sample, gaussian_surrogate };

std::string_view to_string(TraceClock clock);
std::string_view to_string(SimMode mode);

struct TrialRecord {
  bool initial_busy = false;
  std::vector<int> change_samples;
  int x = 0;
  bool terminal_busy = false;
  int b = 0;
  bool coincident = false;  // two changes fell in one sample (continuous clock only)
  double y = 0.0;
  bool decided_busy = false;
};

TrialRecord gen_trace(const TrafficModel& model, const SensingConfig& config, RandomStream& rng,
                      TraceClock clock = TraceClock::lattice);

/// Counts of trials per (x, b) for one terminal state; x and b both in [0, I].
class TrialHistogram {
 public:
  explicit TrialHistogram(int window = 0);

  int window() const noexcept { return window_; }
  std::uint64_t count(int x, int b) const;
  void add(int x, int b, std::uint64_t n = 1);
  std::uint64_t total() const;
  TrialHistogram& operator+=(const TrialHistogram& other);

  friend bool operator==(const TrialHistogram&, const TrialHistogram&) = default;

 private:
  int window_;
  std::vector<std::uint64_t> counts_;
};

struct RunOptions {
  SimMode mode = SimMode::gaussian_surrogate;
  TraceClock clock = TraceClock::lattice;
  std::uint64_t seed = 1;
};

/// Empirical exceedance rates at one threshold.
struct McPoint {
  double eta;
  double pfa_hat;
  double pd_hat;
  double stderr_pfa;
  double stderr_pd;
};

/// Trials are evaluated once and thresholded at every eta of the grid.
/// Trials with x > N are left out of the rates (matching the truncated
/// averages) and counted as discarded together with coincident traces.
struct McGridEstimate {
  std::vector<McPoint> points;
  std::uint64_t trials_used_idle = 0;
  std::uint64_t trials_used_busy = 0;
  std::uint64_t trials_discarded = 0;
  std::uint64_t trials_coincident = 0;
  /// All non-coincident trials, including those beyond N.
  TrialHistogram histogram_idle;
  TrialHistogram histogram_busy;
};

struct McEstimate {
  double pfa_hat;
  double pd_hat;
  double stderr_pfa;
  double stderr_pd;
  std::uint64_t trials_used_idle;
  std::uint64_t trials_used_busy;
  std::uint64_t trials_discarded;
  std::uint64_t trials_coincident;
  TrialHistogram histogram_idle;
  TrialHistogram histogram_busy;
};

/// Binomial standard error sqrt(p (1 - p) / n).
double binomial_stderr(double p, std::uint64_t n);

/// Parallel over trials; trial i draws from RandomStream::substream(seed, i),
/// so the result does not depend on the thread count.
McGridEstimate run_trials_grid(const TrafficModel& model, const SensingConfig& config,
                               const std::vector<double>& etas, std::uint64_t trials,
                               const RunOptions& options);
/// Single-threaded reference for run_trials_grid().
McGridEstimate run_trials_grid_serial(const TrafficModel& model, const SensingConfig& config,
                                      const std::vector<double>& etas, std::uint64_t trials,
                                      const RunOptions& options);

McEstimate run_trials(const TrafficModel& model, const SensingConfig& config, double eta,
                      std::uint64_t trials, const RunOptions& options);

}  // namespace edsense::mc
