#include "edsense/detector.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <fmt/format.h>

#include "edsense/errors.hpp"
#include "edsense/numerics.hpp"

namespace edsense {

double SensingConfig::snr_linear() const noexcept { return std::pow(10.0, snr_db / 10.0); }

void SensingConfig::validate() const {
  if (samples < 1) throw DomainError(fmt::format("sensing: I must be >= 1, got {}", samples));
  if (!(sample_ms > 0.0) || !std::isfinite(sample_ms)) {
    throw DomainError(fmt::format("sensing: t_s must be positive, got {}", sample_ms));
  }
  if (!std::isfinite(snr_db)) throw DomainError("sensing: snr_db must be finite");
  if (max_changes < 0 || max_changes > samples) {
    throw DomainError(
        fmt::format("sensing: N must lie in [0, I={}], got {}", samples, max_changes));
  }
}

Moments cond_stats(int busy, int samples, double gamma_p) {
  if (samples < 1 || busy < 0 || busy > samples) {
    throw DomainError(fmt::format("cond_stats: busy count {} outside [0, {}]", busy, samples));
  }
  if (!(gamma_p >= 0.0)) throw DomainError("cond_stats: gamma_p must be nonnegative");
  return {samples + busy * gamma_p, 2.0 * samples + 4.0 * busy * gamma_p};
}

double cond_prob_exceed(double eta, double mean, double variance) {
  if (!(variance > 0.0)) throw DomainError("cond_prob_exceed: variance must be positive");
  if (std::isinf(eta)) return eta > 0 ? 0.0 : 1.0;
  return 0.5 * numerics::erfc((eta - mean) / std::sqrt(2.0 * variance));
}

double exact_prob_exceed(double eta, int busy, int samples, double gamma_p) {
  cond_stats(busy, samples, gamma_p);
  if (std::isnan(eta)) throw DomainError("exact_prob_exceed: eta is NaN");
  if (eta <= 0.0) return 1.0;
  if (std::isinf(eta)) return 0.0;
  const double lambda = busy * gamma_p;
  if (lambda == 0.0) {
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(samples), eta));
  }
  const boost::math::non_central_chi_squared law(samples, lambda);
  return boost::math::cdf(boost::math::complement(law, eta));
}

namespace {

// Normalized per-busy-count weights of a table; throws on zero mass.
std::vector<double> normalized_marginal(const WeightTable& table) {
  std::vector<double> m = table.busy_marginal();
  const double total = table.total();
  if (!(total > 0.0)) {
    throw DegenerateModelError(fmt::format("weight table (terminal {}) has zero total weight",
                                           table.terminal_busy() ? "busy" : "idle"));
  }
  for (double& w : m) w /= total;
  return m;
}

double average_exceed(double eta, const std::vector<double>& marginal, int samples,
                      double gamma_p) {
  double acc = 0.0;
  for (int b = 0; b < static_cast<int>(marginal.size()); ++b) {
    if (marginal[b] == 0.0) continue;
    const Moments m = cond_stats(b, samples, gamma_p);
    acc += marginal[b] * cond_prob_exceed(eta, m.mean, m.variance);
  }
  return std::clamp(acc, 0.0, 1.0);
}

double average_exact(double eta, const std::vector<double>& marginal, int samples,
                     double gamma_p) {
  double acc = 0.0;
  for (int b = 0; b < static_cast<int>(marginal.size()); ++b) {
    if (marginal[b] == 0.0) continue;
    acc += marginal[b] * exact_prob_exceed(eta, b, samples, gamma_p);
  }
  return std::clamp(acc, 0.0, 1.0);
}

void check_table(const WeightTable& table, bool want_busy, const SensingConfig& config) {
  config.validate();
  if (table.terminal_busy() != want_busy) {
    throw DomainError(want_busy ? "uncond_pd needs the terminal-busy table"
                                : "uncond_pfa needs the terminal-idle table");
  }
  if (table.window() != config.samples) {
    throw DomainError("weight table window does not match the sensing configuration");
  }
}

}  // namespace

double uncond_pfa(double eta, const WeightTable& idle_table, const SensingConfig& config) {
  check_table(idle_table, false, config);
  return average_exceed(eta, normalized_marginal(idle_table), config.samples, config.snr_linear());
}

double uncond_pd(double eta, const WeightTable& busy_table, const SensingConfig& config) {
  check_table(busy_table, true, config);
  return average_exceed(eta, normalized_marginal(busy_table), config.samples, config.snr_linear());
}

SensingAnalysis::SensingAnalysis(const TrafficModel& model, const SensingConfig& config)
    : model_(model),
      config_(config),
      tables_(weight_tables(model, config.samples, config.sample_ms, config.max_changes,
                            config.mode)) {
  config_.validate();
  idle_marginal_ = normalized_marginal(tables_.idle);
  busy_marginal_ = normalized_marginal(tables_.busy);
}

double SensingAnalysis::pfa(double eta) const {
  return average_exceed(eta, idle_marginal_, config_.samples, config_.snr_linear());
}

double SensingAnalysis::pd(double eta) const {
  return average_exceed(eta, busy_marginal_, config_.samples, config_.snr_linear());
}

double SensingAnalysis::exact_pfa(double eta) const {
  return average_exact(eta, idle_marginal_, config_.samples, config_.snr_linear());
}

double SensingAnalysis::exact_pd(double eta) const {
  return average_exact(eta, busy_marginal_, config_.samples, config_.snr_linear());
}

std::pair<double, double> SensingAnalysis::threshold_bracket() const {
  const auto first = std::find_if(busy_marginal_.begin(), busy_marginal_.end(),
                                  [](double w) { return w > 0.0; });
  const auto last = std::find_if(busy_marginal_.rbegin(), busy_marginal_.rend(),
                                 [](double w) { return w > 0.0; });
  const int b_min = static_cast<int>(first - busy_marginal_.begin());
  const int b_max = static_cast<int>(busy_marginal_.rend() - last) - 1;
  const double gamma = config_.snr_linear();
  const Moments lo = cond_stats(b_min, config_.samples, gamma);
  const Moments hi = cond_stats(b_max, config_.samples, gamma);
  const double sd_max = std::sqrt(hi.variance);
  return {lo.mean - 10.0 * sd_max, hi.mean + 10.0 * sd_max};
}

OperatingPoint SensingAnalysis::np_threshold(double target_pd) const {
  if (!(target_pd > 0.0 && target_pd < 1.0)) {
    throw DomainError(fmt::format("np_threshold: target pd must lie in (0, 1), got {}", target_pd));
  }
  const auto [lo, hi] = threshold_bracket();
  double eta = 0.0;
  try {
    eta = numerics::bisect([&](double e) { return pd(e) - target_pd; }, lo, hi,
                           numerics::Tolerance{1e-11, 200});
  } catch (const BracketError& e) {
    throw ConvergenceError(fmt::format("np_threshold: {}", e.what()));
  }
  return at(eta);
}

OperatingPoint np_threshold(const TrafficModel& model, const SensingConfig& config,
                            double target_pd) {
  return SensingAnalysis(model, config).np_threshold(target_pd);
}

std::vector<double> default_eta_grid(const SensingConfig& config, int points, double span_sigma) {
  config.validate();
  if (points < 2) throw DomainError("eta grid: need at least two points");
  if (!(span_sigma > 0.0)) throw DomainError("eta grid: span must be positive");
  const double gamma = config.snr_linear();
  const Moments top = cond_stats(config.samples, config.samples, gamma);
  const Moments bottom = cond_stats(0, config.samples, gamma);
  const double hi = top.mean + span_sigma * std::sqrt(top.variance);
  const double lo = bottom.mean - span_sigma * std::sqrt(bottom.variance);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = hi - (hi - lo) * i / (points - 1);
  return grid;
}

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("roc: eta grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] <= grid[i - 1])) throw DomainError("roc: eta grid must be sorted descending");
  }
}

}  // namespace

RocCurve roc(const TrafficModel& model, const SensingConfig& config,
             const std::vector<double>& eta_grid) {
  check_grid(eta_grid);
  const SensingAnalysis analysis(model, config);
  RocCurve curve{std::vector<OperatingPoint>(eta_grid.size()), config, model};
  const auto n = static_cast<std::ptrdiff_t>(eta_grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) curve.points[i] = analysis.at(eta_grid[i]);
  return curve;
}

RocCurve roc_serial(const TrafficModel& model, const SensingConfig& config,
                    const std::vector<double>& eta_grid) {
  check_grid(eta_grid);
  const SensingAnalysis analysis(model, config);
  RocCurve curve{{}, config, model};
  curve.points.reserve(eta_grid.size());
  for (double eta : eta_grid) curve.points.push_back(analysis.at(eta));
  return curve;
}

double throughput(const SensingAnalysis& analysis, double frame_ms, double tau_ms, double gamma_s,
                  double eta) {
  const SensingConfig& config = analysis.config();
  if (!(frame_ms > 0.0)) throw DomainError("throughput: frame duration T must be positive");
  if (!(tau_ms > 0.0) || tau_ms > frame_ms) {
    throw DomainError(fmt::format("throughput: tau={} must lie in (0, T={}]", tau_ms, frame_ms));
  }
  if (std::abs(tau_ms - config.window_ms()) > 1e-9 * std::max(1.0, frame_ms)) {
    throw DomainError(fmt::format("throughput: tau={} ms does not equal I*t_s={} ms", tau_ms,
                                  config.window_ms()));
  }
  if (!(gamma_s >= 0.0)) throw DomainError("throughput: gamma_s must be nonnegative");
  const double idle_mass = analysis.tables().idle.total();
  const double busy_mass = analysis.tables().busy.total();
  const double rate_clear = std::log2(1.0 + gamma_s);
  const double rate_interfered = std::log2(1.0 + gamma_s / (1.0 + config.snr_linear()));
  const double fraction = (frame_ms - tau_ms) / frame_ms;
  return (idle_mass * (1.0 - analysis.pfa(eta)) * rate_clear +
          busy_mass * (1.0 - analysis.pd(eta)) * rate_interfered) *
         fraction;
}

double throughput(const TrafficModel& model, const SensingConfig& config, double frame_ms,
                  double tau_ms, double gamma_s, double eta) {
  return throughput(SensingAnalysis(model, config), frame_ms, tau_ms, gamma_s, eta);
}

}  // namespace edsense
