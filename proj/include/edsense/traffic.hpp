#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "edsense/errors.hpp"
#include "edsense/rng.hpp"

namespace edsense {

enum class HoldingKind { exponential, lognormal, gamma, erlang };

std::string_view to_string(HoldingKind kind);
/// Throws DomainError for an unknown name.
HoldingKind parse_holding_kind(std::string_view name);

/// Holding-time law of one channel state (idle or busy). Times are in ms.
///
/// Parameterization per kind:
///   exponential  rate (1/ms)
///   lognormal    mu, sigma of the underlying normal (log-ms)
///   gamma        shape k, scale theta (ms)
///   erlang       integer shape m, rate (1/ms)
class HoldingDist {
 public:
  static HoldingDist exponential(double rate);
  static HoldingDist lognormal(double mu, double sigma);
  static HoldingDist gamma(double shape, double scale);
  static HoldingDist erlang(int shape, double rate);

  /// Builds the law of the given kind with the requested mean. The shape hint
  /// is sigma for lognormal, k for gamma, m for erlang and is ignored for
  /// exponential; it defaults to 0.5 / 2 / 2.
  static HoldingDist from_mean(HoldingKind kind, double mean_ms,
                               std::optional<double> shape_hint = std::nullopt);

  static double default_shape(HoldingKind kind);

  HoldingKind kind() const noexcept { return kind_; }
  double mean() const noexcept { return mean_; }
  /// Kind-specific first and second parameters, in the order listed above.
  double param1() const noexcept { return p1_; }
  double param2() const noexcept { return p2_; }
  /// sigma / k / m; 1 for exponential.
  double shape() const noexcept;

  double cdf(double t_ms) const;
  double survival(double t_ms) const { return 1.0 - cdf(t_ms); }

  /// Probability that an interval started at a sample boundary ends in sample
  /// `gap`: F(gap t_s) - F((gap - 1) t_s).
  double change_pmf(int gap, double t_s) const;
  /// 1 - F(gap t_s).
  double survival_beyond(int gap, double t_s) const;

  double sample(RandomStream& rng) const;

  std::string describe() const;

  friend bool operator==(const HoldingDist&, const HoldingDist&) = default;

 private:
  HoldingDist(HoldingKind kind, double p1, double p2);

  HoldingKind kind_;
  double p1_;
  double p2_;
  double mean_;
};

/// Alternating 1-0 traffic. `idle` governs how long the channel stays free
/// (its end is an arrival), `busy` how long the user stays (its end is a
/// departure).
struct TrafficModel {
  HoldingDist idle;
  HoldingDist busy;
  double p_busy = 0.5;

  double p_idle() const noexcept { return 1.0 - p_busy; }
  const HoldingDist& law(bool busy_state) const noexcept { return busy_state ? busy : idle; }
  double prior(bool busy_state) const noexcept { return busy_state ? p_busy : p_idle(); }

  void validate() const;

  friend bool operator==(const TrafficModel&, const TrafficModel&) = default;
};

}  // namespace edsense
