#include "edsense/hypothesis.hpp"

#include <array>
#include <numeric>

#include <fmt/format.h>

#include "edsense/errors.hpp"

namespace edsense {

std::string_view to_string(WeightMode mode) {
  return mode == WeightMode::renewal ? "renewal" : "literal";
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "renewal") return WeightMode::renewal;
  if (name == "literal") return WeightMode::literal;
  throw DomainError(fmt::format("unknown weight mode '{}'", name));
}

void ChangePattern::validate() const {
  if (window < 1) throw DomainError("change pattern: window must be >= 1");
  int prev = 0;
  for (int c : changes) {
    if (c <= prev || c > window) {
      throw DomainError(fmt::format(
          "change pattern: changes must be strictly increasing within [1, {}], saw {} after {}",
          window, c, prev));
    }
    prev = c;
  }
}

int busy_count(const ChangePattern& pattern) {
  pattern.validate();
  int busy = 0;
  int start = 0;
  bool state = pattern.initial_busy;
  for (int c : pattern.changes) {
    if (state) busy += c - start;
    start = c;
    state = !state;
  }
  if (state) busy += pattern.window - start;
  return busy;
}

double pattern_weight(const ChangePattern& pattern, const TrafficModel& model, double t_s,
                      WeightMode mode) {
  pattern.validate();
  model.validate();
  bool state = pattern.initial_busy;
  double w = model.prior(state);
  int last = 0;
  for (int c : pattern.changes) {
    const HoldingDist& law = model.law(state);
    w *= mode == WeightMode::renewal ? law.change_pmf(c - last, t_s) : law.change_pmf(c, t_s);
    last = c;
    state = !state;
  }
  const HoldingDist& law = model.law(state);
  if (mode == WeightMode::renewal) {
    w *= law.survival_beyond(pattern.window - last, t_s);
  } else {
    w *= 1.0 - (law.cdf(pattern.window * t_s) - law.cdf(last * t_s));
  }
  return w;
}

namespace {

void check_window(int window, int max_changes) {
  if (window < 1) throw DomainError(fmt::format("window must be >= 1, got {}", window));
  if (max_changes < 0 || max_changes > window) {
    throw DomainError(
        fmt::format("max changes N must lie in [0, I={}], got {}", window, max_changes));
  }
}

void extend(ChangePattern& p, int remaining, int next_min,
            const std::function<void(const ChangePattern&)>& visit) {
  if (remaining == 0) {
    visit(p);
    return;
  }
  for (int c = next_min; c <= p.window - remaining + 1; ++c) {
    p.changes.push_back(c);
    extend(p, remaining - 1, c + 1, visit);
    p.changes.pop_back();
  }
}

}  // namespace

void for_each_pattern(int window, int max_changes, bool terminal_busy, bool initial_busy,
                      const std::function<void(const ChangePattern&)>& visit) {
  check_window(window, max_changes);
  const int parity = initial_busy != terminal_busy ? 1 : 0;
  ChangePattern p{initial_busy, {}, window};
  for (int x = parity; x <= max_changes; x += 2) extend(p, x, 1, visit);
}

std::vector<ChangePattern> enumerate_patterns(int window, int max_changes, bool terminal_busy,
                                              bool initial_busy) {
  std::vector<ChangePattern> out;
  for_each_pattern(window, max_changes, terminal_busy, initial_busy,
                   [&](const ChangePattern& p) { out.push_back(p); });
  return out;
}

WeightTable::WeightTable(bool terminal_busy, int max_changes, int window)
    : terminal_busy_(terminal_busy),
      max_changes_(max_changes),
      window_(window),
      weights_(static_cast<std::size_t>(max_changes + 1) * static_cast<std::size_t>(window + 1),
               0.0) {
  check_window(window, max_changes);
}

std::size_t WeightTable::index(int x, int b) const {
  if (x < 0 || x > max_changes_ || b < 0 || b > window_) {
    throw DomainError(fmt::format("weight table: entry ({}, {}) out of range", x, b));
  }
  return static_cast<std::size_t>(x) * static_cast<std::size_t>(window_ + 1) +
         static_cast<std::size_t>(b);
}

double WeightTable::total() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

std::vector<double> WeightTable::busy_marginal() const {
  std::vector<double> out(static_cast<std::size_t>(window_ + 1), 0.0);
  for (int x = 0; x <= max_changes_; ++x) {
    for (int b = 0; b <= window_; ++b) out[b] += weights_[index(x, b)];
  }
  return out;
}

std::vector<double> WeightTable::change_marginal() const {
  std::vector<double> out(static_cast<std::size_t>(max_changes_ + 1), 0.0);
  for (int x = 0; x <= max_changes_; ++x) {
    for (int b = 0; b <= window_; ++b) out[x] += weights_[index(x, b)];
  }
  return out;
}

WeightTables weight_tables(const TrafficModel& model, int window, double t_s, int max_changes,
                           WeightMode mode) {
  check_window(window, max_changes);
  model.validate();
  if (!(t_s > 0.0)) throw DomainError("weight table: sample duration must be positive");

  const int I = window;
  const auto n = static_cast<std::size_t>(I + 1);

  // Per state: step PMF indexed by gap (renewal) or absolute sample (literal),
  // terminal factor indexed by the last change sample.
  std::array<std::vector<double>, 2> step;      // PMF factor, index gap or sample
  std::array<std::vector<double>, 2> terminal;  // final-run factor, index last change
  for (int s = 0; s < 2; ++s) {
    const HoldingDist& law = model.law(s == 1);
    step[s].assign(n, 0.0);
    terminal[s].assign(n, 0.0);
    for (int g = 1; g <= I; ++g) step[s][g] = law.change_pmf(g, t_s);
    if (mode == WeightMode::renewal) {
      for (int p = 0; p <= I; ++p) terminal[s][p] = law.survival_beyond(I - p, t_s);
    } else {
      const double end = law.cdf(I * t_s);
      for (int p = 0; p <= I; ++p) terminal[s][p] = 1.0 - (end - law.cdf(p * t_s));
    }
  }

  WeightTables tables{WeightTable(false, max_changes, I), WeightTable(true, max_changes, I)};

  // layer[s][p * n + b]: mass of partial patterns with x changes, the last at
  // sample p (0 = none yet), b busy samples in [1, p], state s after p.
  std::array<std::vector<double>, 2> layer{std::vector<double>(n * n, 0.0),
                                           std::vector<double>(n * n, 0.0)};
  std::array<std::vector<double>, 2> next = layer;
  layer[0][0] = model.prior(false);
  layer[1][0] = model.prior(true);

  for (int x = 0; x <= max_changes; ++x) {
    for (auto& v : next) std::fill(v.begin(), v.end(), 0.0);
    for (int s = 0; s < 2; ++s) {
      const bool busy = s == 1;
      WeightTable& out = busy ? tables.busy : tables.idle;
      for (int p = 0; p <= I; ++p) {
        for (int b = 0; b <= p; ++b) {
          const double w = layer[s][p * n + b];
          if (w == 0.0) continue;
          out.add(x, b + (busy ? I - p : 0), w * terminal[s][p]);
          if (x == max_changes) continue;
          auto& dst = next[1 - s];
          for (int q = p + 1; q <= I; ++q) {
            const double f = mode == WeightMode::renewal ? step[s][q - p] : step[s][q];
            dst[q * n + b + (busy ? q - p : 0)] += w * f;
          }
        }
      }
    }
    std::swap(layer, next);
  }
  return tables;
}

WeightTable weight_table(const TrafficModel& model, int window, double t_s, int max_changes,
                         bool terminal_busy, WeightMode mode) {
  WeightTables t = weight_tables(model, window, t_s, max_changes, mode);
  return terminal_busy ? std::move(t.busy) : std::move(t.idle);
}

}  // namespace edsense
