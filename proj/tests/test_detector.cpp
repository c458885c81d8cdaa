#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "edsense/detector.hpp"
#include "oracles.hpp"

using namespace edsense;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TrafficModel base_traffic() {
  return {HoldingDist::from_mean(HoldingKind::exponential, 5.0),
          HoldingDist::from_mean(HoldingKind::exponential, 5.0), 0.5};
}

SensingConfig config(int I, int N, double snr_db = -5.0) {
  return {I, 1.0, snr_db, N, WeightMode::renewal};
}

// Oracle: per-pattern weighted average of the Gaussian exceedance, with the
// Gaussian tail taken from the 50-digit erfc.
struct NaiveAverage {
  double mass = 0.0;
  double weighted = 0.0;
  double value() const { return weighted / mass; }
};

NaiveAverage naive_average(const TrafficModel& m, const SensingConfig& c, bool terminal_busy,
                           double eta) {
  NaiveAverage acc;
  const double g = c.snr_linear();
  for (bool initial : {false, true}) {
    for_each_pattern(c.samples, c.max_changes, terminal_busy, initial,
                     [&](const ChangePattern& p) {
                       const double w = pattern_weight(p, m, c.sample_ms, c.mode);
                       const int b = busy_count(p);
                       const double mean = c.samples + b * g;
                       const double var = 2.0 * c.samples + 4.0 * b * g;
                       acc.mass += w;
                       acc.weighted += w * 0.5 * oracle::erfc50((eta - mean) / std::sqrt(2 * var));
                     });
  }
  return acc;
}

// Oracle: per-busy-count marginal built from brute-force enumeration.
std::vector<double> naive_marginal(const TrafficModel& m, const SensingConfig& c,
                                   bool terminal_busy) {
  std::vector<double> w(c.samples + 1, 0.0);
  for (bool initial : {false, true}) {
    for_each_pattern(c.samples, c.max_changes, terminal_busy, initial, [&](const ChangePattern& p) {
      w[busy_count(p)] += pattern_weight(p, m, c.sample_ms, c.mode);
    });
  }
  return w;
}

double marginal_exceed(const std::vector<double>& w, const SensingConfig& c, double eta) {
  double num = 0.0;
  double den = 0.0;
  const double g = c.snr_linear();
  for (int b = 0; b < static_cast<int>(w.size()); ++b) {
    if (w[b] == 0.0) continue;
    const double mean = c.samples + b * g;
    const double var = 2.0 * c.samples + 4.0 * b * g;
    num += w[b] * 0.5 * std::erfc((eta - mean) / std::sqrt(2 * var));
    den += w[b];
  }
  return num / den;
}

}  // namespace

TEST_CASE("cond_stats closed forms") {
  const double g = std::pow(10.0, -0.5);
  Moments m = cond_stats(0, 20, g);
  CHECK(m.mean == 20.0);
  CHECK(m.variance == 40.0);
  m = cond_stats(20, 20, g);
  CHECK(m.mean == doctest::Approx(26.32456).epsilon(1e-6));
  CHECK(m.variance == doctest::Approx(65.29822).epsilon(1e-6));
  m = cond_stats(5, 20, g);
  CHECK(m.mean == doctest::Approx(21.58114).epsilon(1e-6));
  CHECK(m.variance == doctest::Approx(46.32456).epsilon(1e-6));
  CHECK_THROWS_AS(cond_stats(21, 20, g), DomainError);
  CHECK_THROWS_AS(cond_stats(-1, 20, g), DomainError);
}

TEST_CASE("cond_prob_exceed") {
  CHECK(cond_prob_exceed(20.0, 20.0, 40.0) == 0.5);
  CHECK(cond_prob_exceed(kInf, 20.0, 40.0) == 0.0);
  CHECK(cond_prob_exceed(-kInf, 20.0, 40.0) == 1.0);
  CHECK(cond_prob_exceed(1e6, 20.0, 40.0) == 0.0);
  CHECK(cond_prob_exceed(-1e6, 20.0, 40.0) == 1.0);
  const double ref = 0.5 * oracle::erfc50(10.0 / std::sqrt(80.0));
  CHECK(std::abs(cond_prob_exceed(30.0, 20.0, 40.0) - ref) < 1e-15);
  CHECK(std::abs(ref - 0.056923) < 1e-6);
  CHECK_THROWS_AS(cond_prob_exceed(1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("unconditional averages: single-term and signal-free reductions") {
  const TrafficModel m = base_traffic();
  const SensingConfig c0 = config(20, 0);
  const WeightTables t0 = weight_tables(m, 20, 1.0, 0, WeightMode::renewal);
  for (double eta : {5.0, 20.0, 31.7, 60.0}) {
    CHECK(uncond_pfa(eta, t0.idle, c0) == cond_prob_exceed(eta, 20.0, 40.0));
    const Moments full = cond_stats(20, 20, c0.snr_linear());
    CHECK(uncond_pd(eta, t0.busy, c0) == cond_prob_exceed(eta, full.mean, full.variance));
  }
  CHECK(uncond_pd(-kInf, t0.busy, c0) == 1.0);

  SensingConfig silent = config(20, 4);
  silent.snr_db = -4000.0;  // gamma_p underflows to 0
  REQUIRE(silent.snr_linear() == 0.0);
  const WeightTables t4 = weight_tables(m, 20, 1.0, 4, WeightMode::renewal);
  for (double eta : {10.0, 20.0, 35.0}) {
    CHECK(std::abs(uncond_pfa(eta, t4.idle, silent) - cond_prob_exceed(eta, 20.0, 40.0)) < 1e-15);
    CHECK(std::abs(uncond_pd(eta, t4.busy, silent) - cond_prob_exceed(eta, 20.0, 40.0)) < 1e-15);
  }

  CHECK_THROWS_AS(uncond_pfa(1.0, t4.busy, config(20, 4)), DomainError);
  CHECK_THROWS_AS(uncond_pd(1.0, t4.busy, config(12, 4)), DomainError);
}

TEST_CASE("unconditional averages equal per-pattern weighted averages") {
  for (auto mode : {WeightMode::renewal, WeightMode::literal}) {
    const TrafficModel m = base_traffic();
    SensingConfig c = config(12, 3);
    c.mode = mode;
    const WeightTables t = weight_tables(m, 12, 1.0, 3, mode);
    CHECK(std::abs(uncond_pfa(14.0, t.idle, c) - naive_average(m, c, false, 14.0).value()) < 1e-12);
    CHECK(std::abs(uncond_pd(16.0, t.busy, c) - naive_average(m, c, true, 16.0).value()) < 1e-12);
    for (double eta = 0.0; eta <= 40.0; eta += 2.5) {
      CHECK(std::abs(uncond_pfa(eta, t.idle, c) - naive_average(m, c, false, eta).value()) <
            1e-12);
      CHECK(std::abs(uncond_pd(eta, t.busy, c) - naive_average(m, c, true, eta).value()) < 1e-12);
    }
  }
}

TEST_CASE("degenerate table") {
  const TrafficModel never_busy{HoldingDist::exponential(0.2), HoldingDist::exponential(0.2), 0.0};
  const WeightTables t = weight_tables(never_busy, 10, 1.0, 0, WeightMode::renewal);
  CHECK_THROWS_AS(uncond_pd(10.0, t.busy, config(10, 0)), DegenerateModelError);
  CHECK_THROWS_AS(SensingAnalysis(never_busy, config(10, 0)), DegenerateModelError);
}

TEST_CASE("np_threshold") {
  const TrafficModel m = base_traffic();
  for (int N = 0; N <= 4; ++N) {
    const OperatingPoint p = np_threshold(m, config(20, N), 0.9);
    CHECK(std::abs(p.pd - 0.9) <= 1e-9);
  }
  const SensingConfig c0 = config(20, 0);
  const OperatingPoint median = np_threshold(m, c0, 0.5);
  CHECK(std::abs(median.eta - (20.0 + 20.0 * c0.snr_linear())) < 1e-8);

  CHECK_THROWS_AS(np_threshold(m, c0, 0.0), DomainError);
  CHECK_THROWS_AS(np_threshold(m, c0, 1.0), DomainError);
}

TEST_CASE("np_threshold agrees with a million-point grid scan") {
  const TrafficModel m = base_traffic();
  const SensingConfig c = config(20, 2);
  const auto busy_w = naive_marginal(m, c, true);
  const auto idle_w = naive_marginal(m, c, false);

  const SensingAnalysis analysis(m, c);
  const auto [lo, hi] = analysis.threshold_bracket();
  const int points = 1000000;
  double prev_eta = lo;
  double prev_pd = marginal_exceed(busy_w, c, lo);
  double eta_scan = std::nan("");
  for (int i = 1; i <= points; ++i) {
    const double eta = lo + (hi - lo) * i / points;
    const double pd = marginal_exceed(busy_w, c, eta);
    if (pd <= 0.9) {
      eta_scan = prev_eta + (eta - prev_eta) * (prev_pd - 0.9) / (prev_pd - pd);
      break;
    }
    prev_eta = eta;
    prev_pd = pd;
  }
  REQUIRE(std::isfinite(eta_scan));
  const OperatingPoint p = analysis.np_threshold(0.9);
  CHECK(std::abs(p.eta - eta_scan) < 1e-5);
  CHECK(std::abs(p.pfa - marginal_exceed(idle_w, c, eta_scan)) < 1e-6);
}

TEST_CASE("roc endpoints, classical reduction and grid checks") {
  const TrafficModel m = base_traffic();
  const SensingConfig c = config(20, 4);
  const double g = c.snr_linear();
  const Moments top = cond_stats(20, 20, g);
  const Moments bottom = cond_stats(0, 20, g);
  const RocCurve ends = roc(m, c,
                            {top.mean + 20.0 * std::sqrt(top.variance),
                             bottom.mean - 20.0 * std::sqrt(bottom.variance)});
  CHECK(ends.points.front().pfa <= 1e-12);
  CHECK(ends.points.front().pd <= 1e-12);
  CHECK(ends.points.back().pd >= 1.0 - 1e-12);
  CHECK(ends.points.back().pfa >= 1.0 - 1e-12);

  const SensingConfig c0 = config(20, 0);
  const RocCurve classical = roc(m, c0, default_eta_grid(c0));
  for (const auto& p : classical.points) {
    const double pd = 0.5 * std::erfc((p.eta - 20.0 - 20.0 * g) / std::sqrt(2.0 * (40.0 + 80.0 * g)));
    const double pfa = 0.5 * std::erfc((p.eta - 20.0) / std::sqrt(80.0));
    REQUIRE(std::abs(p.pd - pd) < 1e-14);
    REQUIRE(std::abs(p.pfa - pfa) < 1e-14);
  }

  CHECK_THROWS_AS(roc(m, c, {}), DomainError);
  CHECK_THROWS_AS(roc(m, c, {1.0, 2.0}), DomainError);
}

TEST_CASE("roc monotonicity and mixture bounds") {
  for (auto kind : {HoldingKind::exponential, HoldingKind::lognormal, HoldingKind::gamma,
                    HoldingKind::erlang}) {
    const TrafficModel m{HoldingDist::from_mean(kind, 5.0), HoldingDist::from_mean(kind, 5.0), 0.5};
    for (auto mode : {WeightMode::renewal, WeightMode::literal}) {
      SensingConfig c = config(20, 5);
      c.mode = mode;
      const SensingAnalysis a(m, c);
      const auto grid = default_eta_grid(c, 201, 3.0);
      const RocCurve curve = roc(m, c, grid);
      const auto idle_w = a.tables().idle.busy_marginal();
      const auto busy_w = a.tables().busy.busy_marginal();
      for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i];
        if (i > 0) {
          REQUIRE(p.pfa > curve.points[i - 1].pfa);
          REQUIRE(p.pd > curve.points[i - 1].pd);
        }
        double lo_fa = 1.0, hi_fa = 0.0, lo_d = 1.0, hi_d = 0.0;
        for (int b = 0; b <= 20; ++b) {
          const Moments mo = cond_stats(b, 20, c.snr_linear());
          const double q = cond_prob_exceed(p.eta, mo.mean, mo.variance);
          if (idle_w[b] > 0) lo_fa = std::min(lo_fa, q), hi_fa = std::max(hi_fa, q);
          if (busy_w[b] > 0) lo_d = std::min(lo_d, q), hi_d = std::max(hi_d, q);
        }
        REQUIRE(p.pfa >= lo_fa - 1e-15);
        REQUIRE(p.pfa <= hi_fa + 1e-15);
        REQUIRE(p.pd >= lo_d - 1e-15);
        REQUIRE(p.pd <= hi_d + 1e-15);
      }
    }
  }
}

TEST_CASE("four status changes degrade the 5 ms ROC relative to none") {
  const TrafficModel m = base_traffic();
  const auto grid = default_eta_grid(config(20, 0), 2001);
  const RocCurve r0 = roc(m, config(20, 0), grid);
  const RocCurve r4 = roc(m, config(20, 4), grid);
  // Interpolate pd of the N=0 curve at each pfa of the N=4 curve.
  std::size_t j = 1;
  int compared = 0;
  for (const auto& p : r4.points) {
    if (p.pfa < r0.points.front().pfa || p.pfa > r0.points.back().pfa) continue;
    while (j < r0.points.size() && r0.points[j].pfa < p.pfa) ++j;
    if (j == r0.points.size()) break;
    const auto& a = r0.points[j - 1];
    const auto& b = r0.points[j];
    const double pd0 = a.pd + (b.pd - a.pd) * (p.pfa - a.pfa) / (b.pfa - a.pfa);
    if (p.pfa > 1e-4 && p.pfa < 0.99) {
      REQUIRE(p.pd < pd0);
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("serial and parallel roc agree bit for bit") {
  const TrafficModel m = base_traffic();
  const SensingConfig c = config(40, 6);
  const auto grid = default_eta_grid(c, 501);
  const RocCurve a = roc(m, c, grid);
  const RocCurve b = roc_serial(m, c, grid);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    REQUIRE(a.points[i].pfa == b.points[i].pfa);
    REQUIRE(a.points[i].pd == b.points[i].pd);
  }
}

TEST_CASE("throughput") {
  const TrafficModel m = base_traffic();
  const SensingConfig c = config(20, 2);
  const OperatingPoint p = np_threshold(m, c, 0.9);
  CHECK(throughput(m, c, 20.0, 20.0, 10.0, p.eta) == 0.0);
  CHECK(throughput(m, c, 100.0, 20.0, 0.0, p.eta) == 0.0);

  // Re-derivation from brute-force enumeration totals and averages.
  const NaiveAverage fa = naive_average(m, c, false, p.eta);
  const NaiveAverage d = naive_average(m, c, true, p.eta);
  const double g = c.snr_linear();
  const double expected = (fa.mass * (1.0 - fa.value()) * std::log2(11.0) +
                           d.mass * (1.0 - d.value()) * std::log2(1.0 + 10.0 / (1.0 + g))) *
                          0.8;
  const double got = throughput(m, c, 100.0, 20.0, 10.0, p.eta);
  CHECK(got > 0.0);
  CHECK(std::abs(got - expected) < 1e-10);

  CHECK_THROWS_AS(throughput(m, c, 100.0, 0.0, 10.0, p.eta), DomainError);
  CHECK_THROWS_AS(throughput(m, c, 10.0, 20.0, 10.0, p.eta), DomainError);
  CHECK_THROWS_AS(throughput(m, c, 100.0, 25.0, 10.0, p.eta), DomainError);
}

TEST_CASE("exact chi-square exceedance") {
  const double g = std::pow(10.0, -0.5);
  // Reference values from an independent noncentral chi-square implementation.
  CHECK(exact_prob_exceed(21.5, 0, 20, g) == doctest::Approx(0.368246105306418).epsilon(1e-10));
  CHECK(exact_prob_exceed(25.0, 20, 20, g) == doctest::Approx(0.5267202016981856).epsilon(1e-10));
  CHECK(exact_prob_exceed(25.0, 5, 20, g) == doctest::Approx(0.2804173779668117).epsilon(1e-10));
  CHECK(exact_prob_exceed(40.0, 20, 20, g) == doctest::Approx(0.05866040589009471).epsilon(1e-10));
  CHECK(exact_prob_exceed(10.0, 3, 20, g) == doctest::Approx(0.9757459455457688).epsilon(1e-10));
  CHECK(exact_prob_exceed(0.0, 3, 20, g) == 1.0);
  CHECK(exact_prob_exceed(kInf, 3, 20, g) == 0.0);
  CHECK_THROWS_AS(exact_prob_exceed(10.0, 21, 20, g), DomainError);
  CHECK_THROWS_AS(exact_prob_exceed(std::nan(""), 1, 20, g), DomainError);
}

TEST_CASE("exact averages agree with the Gaussian ones only up to the CLT gap") {
  const SensingAnalysis a(base_traffic(), config(20, 4));
  double worst_pfa = 0.0;
  double worst_pd = 0.0;
  for (double eta = 10.0; eta <= 45.0; eta += 0.05) {
    worst_pfa = std::max(worst_pfa, std::abs(a.exact_pfa(eta) - a.pfa(eta)));
    worst_pd = std::max(worst_pd, std::abs(a.exact_pd(eta) - a.pd(eta)));
  }
  MESSAGE("max |exact - gaussian|: pfa " << worst_pfa << ", pd " << worst_pd);
  // Measured independently with an exact noncentral chi-square mixture.
  CHECK(worst_pfa == doctest::Approx(0.0387).epsilon(0.02));
  CHECK(worst_pd == doctest::Approx(0.0384).epsilon(0.02));
}
