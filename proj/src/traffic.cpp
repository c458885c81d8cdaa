#include "edsense/traffic.hpp"

#include <cmath>
#include <random>
#include <numbers>

#include <fmt/format.h>

#include "edsense/errors.hpp"
#include "edsense/numerics.hpp"

namespace edsense {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(fmt::format("holding distribution: {} must be positive and finite, got {}",
                                  what, v));
  }
}

}  // namespace

std::string_view to_string(HoldingKind kind) {
  switch (kind) {
    case HoldingKind::exponential: return "exponential";
    case HoldingKind::lognormal: return "lognormal";
    case HoldingKind::gamma: return "gamma";
    case HoldingKind::erlang: return "erlang";
  }
  return "unknown";
}

HoldingKind parse_holding_kind(std::string_view name) {
  if (name == "exponential") return HoldingKind::exponential;
  if (name == "lognormal") return HoldingKind::lognormal;
  if (name == "gamma") return HoldingKind::gamma;
  if (name == "erlang") return HoldingKind::erlang;
  throw DomainError(fmt::format("unknown holding-time kind '{}'", name));
}

HoldingDist::HoldingDist(HoldingKind kind, double p1, double p2)
    : kind_(kind), p1_(p1), p2_(p2), mean_(0.0) {
  switch (kind_) {
    case HoldingKind::exponential: mean_ = 1.0 / p1_; break;
    case HoldingKind::lognormal: mean_ = std::exp(p1_ + 0.5 * p2_ * p2_); break;
    case HoldingKind::gamma: mean_ = p1_ * p2_; break;
    case HoldingKind::erlang: mean_ = p1_ / p2_; break;
  }
}

HoldingDist HoldingDist::exponential(double rate) {
  require_positive(rate, "rate");
  return {HoldingKind::exponential, rate, 0.0};
}

HoldingDist HoldingDist::lognormal(double mu, double sigma) {
  if (!std::isfinite(mu)) throw DomainError("holding distribution: mu must be finite");
  require_positive(sigma, "sigma");
  return {HoldingKind::lognormal, mu, sigma};
}

HoldingDist HoldingDist::gamma(double shape, double scale) {
  require_positive(shape, "shape");
  require_positive(scale, "scale");
  return {HoldingKind::gamma, shape, scale};
}

HoldingDist HoldingDist::erlang(int shape, double rate) {
  if (shape < 1) throw DomainError("holding distribution: erlang shape must be a positive integer");
  require_positive(rate, "rate");
  return {HoldingKind::erlang, static_cast<double>(shape), rate};
}

double HoldingDist::default_shape(HoldingKind kind) {
  switch (kind) {
    case HoldingKind::lognormal: return 0.5;
    case HoldingKind::gamma: return 2.0;
    case HoldingKind::erlang: return 2.0;
    case HoldingKind::exponential: return 1.0;
  }
  return 1.0;
}

HoldingDist HoldingDist::from_mean(HoldingKind kind, double mean_ms,
                                   std::optional<double> shape_hint) {
  require_positive(mean_ms, "mean");
  const double shape = shape_hint.value_or(default_shape(kind));
  switch (kind) {
    case HoldingKind::exponential:
      return exponential(1.0 / mean_ms);
    case HoldingKind::lognormal:
      require_positive(shape, "sigma");
      return lognormal(std::log(mean_ms) - 0.5 * shape * shape, shape);
    case HoldingKind::gamma:
      require_positive(shape, "shape");
      return gamma(shape, mean_ms / shape);
    case HoldingKind::erlang: {
      require_positive(shape, "shape");
      if (shape != std::floor(shape)) {
        throw DomainError(fmt::format("holding distribution: erlang shape must be an integer, got {}",
                                      shape));
      }
      const int m = static_cast<int>(shape);
      return erlang(m, m / mean_ms);
    }
  }
  throw DomainError("holding distribution: unknown kind");
}

double HoldingDist::shape() const noexcept {
  switch (kind_) {
    case HoldingKind::lognormal: return p2_;
    case HoldingKind::gamma:
    case HoldingKind::erlang: return p1_;
    case HoldingKind::exponential: return 1.0;
  }
  return 1.0;
}

double HoldingDist::cdf(double t_ms) const {
  if (!(t_ms >= 0.0)) throw DomainError(fmt::format("cdf: time must be nonnegative, got {}", t_ms));
  if (t_ms == 0.0) return 0.0;
  if (std::isinf(t_ms)) return 1.0;
  switch (kind_) {
    case HoldingKind::exponential:
      return -std::expm1(-p1_ * t_ms);
    case HoldingKind::lognormal:
      return 0.5 * numerics::erfc(-(std::log(t_ms) - p1_) / (p2_ * std::numbers::sqrt2));
    case HoldingKind::gamma:
      return numerics::reg_lower_gamma(p1_, t_ms / p2_);
    case HoldingKind::erlang:
      return numerics::reg_lower_gamma(p1_, p2_ * t_ms);
  }
  return 0.0;
}

double HoldingDist::change_pmf(int gap, double t_s) const {
  if (gap < 1) throw DomainError(fmt::format("change_pmf: gap must be >= 1, got {}", gap));
  require_positive(t_s, "sample duration");
  return cdf(gap * t_s) - cdf((gap - 1) * t_s);
}

double HoldingDist::survival_beyond(int gap, double t_s) const {
  if (gap < 0) throw DomainError(fmt::format("survival_beyond: gap must be >= 0, got {}", gap));
  require_positive(t_s, "sample duration");
  return 1.0 - cdf(gap * t_s);
}

double HoldingDist::sample(RandomStream& rng) const {
  switch (kind_) {
    case HoldingKind::exponential:
      return -std::log(rng.uniform_open()) / p1_;
    case HoldingKind::erlang: {
      double t = 0.0;
      for (int i = 0; i < static_cast<int>(p1_); ++i) t -= std::log(rng.uniform_open());
      return t / p2_;
    }
    case HoldingKind::gamma:
      return std::gamma_distribution<double>(p1_, p2_)(rng);
    case HoldingKind::lognormal:
      return std::exp(std::normal_distribution<double>(p1_, p2_)(rng));
  }
  return 0.0;
}

std::string HoldingDist::describe() const {
  switch (kind_) {
    case HoldingKind::exponential:
      return fmt::format("exponential(rate={:.17g}/ms, mean={:.17g}ms)", p1_, mean_);
    case HoldingKind::lognormal:
      return fmt::format("lognormal(mu={:.17g}, sigma={:.17g}, mean={:.17g}ms)", p1_, p2_, mean_);
    case HoldingKind::gamma:
      return fmt::format("gamma(k={:.17g}, theta={:.17g}ms, mean={:.17g}ms)", p1_, p2_, mean_);
    case HoldingKind::erlang:
      return fmt::format("erlang(m={}, rate={:.17g}/ms, mean={:.17g}ms)", static_cast<int>(p1_), p2_,
                         mean_);
  }
  return "unknown";
}

void TrafficModel::validate() const {
  if (!(p_busy >= 0.0 && p_busy <= 1.0)) {
    throw DomainError(fmt::format("traffic: p_b must lie in [0, 1], got {}", p_busy));
  }
}

}  // namespace edsense
