#include "edsense/montecarlo.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "edsense/errors.hpp"
#include "edsense/hypothesis.hpp"

namespace edsense::mc {

std::string_view to_string(TraceClock clock) {
  return clock == TraceClock::lattice ? "lattice" : "continuous";
}

std::string_view to_string(SimMode mode) {
  return mode == SimMode::full_sample ? "full_sample" : "gaussian_surrogate";
}

TrialRecord gen_trace(const TrafficModel& model, const SensingConfig& config, RandomStream& rng,
                      TraceClock clock) {
  const int I = config.samples;
  const double t_s = config.sample_ms;
  TrialRecord rec;
  rec.initial_busy = rng.uniform() < model.p_busy;
  bool state = rec.initial_busy;

  if (clock == TraceClock::lattice) {
    int pos = 0;
    for (;;) {
      const double d = model.law(state).sample(rng);
      const double g = std::max(1.0, std::ceil(d / t_s));
      if (g > I - pos) break;
      pos += static_cast<int>(g);
      rec.change_samples.push_back(pos);
      state = !state;
    }
  } else {
    const double end = I * t_s;
    double t = 0.0;
    int last = 0;
    for (;;) {
      t += model.law(state).sample(rng);
      if (t > end) break;
      const int c = std::clamp(static_cast<int>(std::ceil(t / t_s)), 1, I);
      if (c == last) rec.coincident = true;
      rec.change_samples.push_back(c);
      last = c;
      state = !state;
    }
  }

  rec.x = static_cast<int>(rec.change_samples.size());
  rec.terminal_busy = state;
  if (!rec.coincident) rec.b = busy_count(ChangePattern{rec.initial_busy, rec.change_samples, I});
  return rec;
}

TrialHistogram::TrialHistogram(int window)
    : window_(window),
      counts_(static_cast<std::size_t>(window + 1) * static_cast<std::size_t>(window + 1), 0) {}

std::uint64_t TrialHistogram::count(int x, int b) const {
  if (x < 0 || x > window_ || b < 0 || b > window_) return 0;
  return counts_[static_cast<std::size_t>(x) * (window_ + 1) + b];
}

void TrialHistogram::add(int x, int b, std::uint64_t n) {
  if (x < 0 || x > window_ || b < 0 || b > window_) {
    throw DomainError(fmt::format("trial histogram: ({}, {}) out of range", x, b));
  }
  counts_[static_cast<std::size_t>(x) * (window_ + 1) + b] += n;
}

std::uint64_t TrialHistogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

TrialHistogram& TrialHistogram::operator+=(const TrialHistogram& other) {
  if (other.window_ != window_) throw DomainError("trial histogram: window mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

double binomial_stderr(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

namespace {

struct Tally {
  explicit Tally(int window, std::size_t points)
      : exceed_idle(points, 0), exceed_busy(points, 0), hist_idle(window), hist_busy(window) {}

  std::vector<std::uint64_t> exceed_idle;
  std::vector<std::uint64_t> exceed_busy;
  std::uint64_t used_idle = 0;
  std::uint64_t used_busy = 0;
  std::uint64_t discarded = 0;
  std::uint64_t coincident = 0;
  TrialHistogram hist_idle;
  TrialHistogram hist_busy;

  Tally& operator+=(const Tally& o) {
    for (std::size_t k = 0; k < exceed_idle.size(); ++k) {
      exceed_idle[k] += o.exceed_idle[k];
      exceed_busy[k] += o.exceed_busy[k];
    }
    used_idle += o.used_idle;
    used_busy += o.used_busy;
    discarded += o.discarded;
    coincident += o.coincident;
    hist_idle += o.hist_idle;
    hist_busy += o.hist_busy;
    return *this;
  }
};

double detector_output(const TrialRecord& rec, const SensingConfig& config, double gamma_p,
                       SimMode mode, RandomStream& rng) {
  if (mode == SimMode::gaussian_surrogate) {
    const Moments m = cond_stats(rec.b, config.samples, gamma_p);
    return std::normal_distribution<double>(m.mean, std::sqrt(m.variance))(rng);
  }
  const double amplitude = std::sqrt(gamma_p);
  std::normal_distribution<double> noise(0.0, 1.0);
  double y = 0.0;
  bool busy = rec.initial_busy;
  std::size_t next_change = 0;
  for (int i = 1; i <= config.samples; ++i) {
    const double r = (busy ? amplitude : 0.0) + noise(rng);
    y += r * r;
    if (next_change < rec.change_samples.size() && rec.change_samples[next_change] == i) {
      busy = !busy;
      ++next_change;
    }
  }
  return y;
}

void run_one(std::uint64_t trial, const TrafficModel& model, const SensingConfig& config,
             double gamma_p, const std::vector<double>& etas, const RunOptions& options,
             Tally& tally) {
  RandomStream rng = RandomStream::substream(options.seed, trial);
  TrialRecord rec = gen_trace(model, config, rng, options.clock);
  if (rec.coincident) {
    ++tally.coincident;
    ++tally.discarded;
    return;
  }
  (rec.terminal_busy ? tally.hist_busy : tally.hist_idle).add(rec.x, rec.b);
  if (rec.x > config.max_changes) {
    ++tally.discarded;
    return;
  }
  const double y = detector_output(rec, config, gamma_p, options.mode, rng);
  auto& exceed = rec.terminal_busy ? tally.exceed_busy : tally.exceed_idle;
  ++(rec.terminal_busy ? tally.used_busy : tally.used_idle);
  for (std::size_t k = 0; k < etas.size(); ++k) {
    if (y > etas[k]) ++exceed[k];
  }
}

void check_inputs(const TrafficModel& model, const SensingConfig& config,
                  const std::vector<double>& etas, std::uint64_t trials) {
  model.validate();
  config.validate();
  if (trials < 1) throw DomainError("run_trials: need at least one trial");
  if (etas.empty()) throw DomainError("run_trials: eta grid is empty");
}

McGridEstimate finish(const Tally& t, const std::vector<double>& etas) {
  if (t.used_idle == 0) throw EstimationError("no usable trials ending idle (false-alarm class)");
  if (t.used_busy == 0) throw EstimationError("no usable trials ending busy (detection class)");
  McGridEstimate est{{}, t.used_idle, t.used_busy, t.discarded, t.coincident, t.hist_idle,
                     t.hist_busy};
  est.points.reserve(etas.size());
  for (std::size_t k = 0; k < etas.size(); ++k) {
    const double pfa = static_cast<double>(t.exceed_idle[k]) / static_cast<double>(t.used_idle);
    const double pd = static_cast<double>(t.exceed_busy[k]) / static_cast<double>(t.used_busy);
    est.points.push_back({etas[k], pfa, pd, binomial_stderr(pfa, t.used_idle),
                          binomial_stderr(pd, t.used_busy)});
  }
  return est;
}

}  // namespace

McGridEstimate run_trials_grid(const TrafficModel& model, const SensingConfig& config,
                               const std::vector<double>& etas, std::uint64_t trials,
                               const RunOptions& options) {
  check_inputs(model, config, etas, trials);
  const double gamma_p = config.snr_linear();
  Tally total(config.samples, etas.size());
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel
  {
    Tally local(config.samples, etas.size());
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      run_one(static_cast<std::uint64_t>(i), model, config, gamma_p, etas, options, local);
    }
#pragma omp critical(edsense_mc_reduce)
    total += local;
  }
  return finish(total, etas);
}

McGridEstimate run_trials_grid_serial(const TrafficModel& model, const SensingConfig& config,
                                      const std::vector<double>& etas, std::uint64_t trials,
                                      const RunOptions& options) {
  check_inputs(model, config, etas, trials);
  const double gamma_p = config.snr_linear();
  Tally total(config.samples, etas.size());
  for (std::uint64_t i = 0; i < trials; ++i) run_one(i, model, config, gamma_p, etas, options, total);
  return finish(total, etas);
}

McEstimate run_trials(const TrafficModel& model, const SensingConfig& config, double eta,
                      std::uint64_t trials, const RunOptions& options) {
  McGridEstimate g = run_trials_grid(model, config, {eta}, trials, options);
  const McPoint& p = g.points.front();
  return {p.pfa_hat,
          p.pd_hat,
          p.stderr_pfa,
          p.stderr_pd,
          g.trials_used_idle,
          g.trials_used_busy,
          g.trials_discarded,
          g.trials_coincident,
          std::move(g.histogram_idle),
          std::move(g.histogram_busy)};
}

}  // namespace edsense::mc
