#pragma once

#include <functional>
#include <span>
#include <vector>

#include "edsense/traffic.hpp"

namespace edsense {

/// How the holding-time CDFs are evaluated inside a pattern likelihood.
///   renewal  each factor uses the gap since the previous change (or since
///            sample 0); self-normalizing over all patterns.
///   literal  each factor uses the absolute change sample and the terminal
///            factor is 1 - (F(I t_s) - F(last t_s)).
enum class WeightMode { renewal, literal };

std::string_view to_string(WeightMode mode);
WeightMode parse_weight_mode(std::string_view name);

/// Status changes of the primary user inside a window of `window` samples.
/// A change at sample g means the new state holds from sample g+1 onward.
struct ChangePattern {
  bool initial_busy = false;
  std::vector<int> changes;
  int window = 0;

  int change_count() const noexcept { return static_cast<int>(changes.size()); }
  bool terminal_busy() const noexcept { return initial_busy != (changes.size() % 2 == 1); }

  /// Throws DomainError unless changes are strictly increasing within [1, window].
  void validate() const;
};

/// Number of samples in [1, window] during which the user is present.
int busy_count(const ChangePattern& pattern);

/// Occurrence probability of one pattern: prior of the initial state, times
/// one change-sample PMF per change, times the survival of the final run.
double pattern_weight(const ChangePattern& pattern, const TrafficModel& model, double t_s,
                      WeightMode mode);

/// Visits every strictly increasing tuple of x change samples in [1, window],
/// for each x in [0, max_changes] whose parity links the two states.
void for_each_pattern(int window, int max_changes, bool terminal_busy, bool initial_busy,
                      const std::function<void(const ChangePattern&)>& visit);

std::vector<ChangePattern> enumerate_patterns(int window, int max_changes, bool terminal_busy,
                                              bool initial_busy);

/// Aggregated occurrence weights for all patterns ending in one state,
/// indexed by (change count x, busy-sample count b).
class WeightTable {
 public:
  WeightTable(bool terminal_busy, int max_changes, int window);

  bool terminal_busy() const noexcept { return terminal_busy_; }
  int max_changes() const noexcept { return max_changes_; }
  int window() const noexcept { return window_; }

  double weight(int x, int b) const { return weights_.at(index(x, b)); }
  void add(int x, int b, double w) { weights_.at(index(x, b)) += w; }

  double total() const;
  /// Weight summed over x, one entry per busy count b in [0, window].
  std::vector<double> busy_marginal() const;
  /// Weight summed over b, one entry per change count x in [0, max_changes].
  std::vector<double> change_marginal() const;

 private:
  std::size_t index(int x, int b) const;

  bool terminal_busy_;
  int max_changes_;
  int window_;
  std::vector<double> weights_;
};

/// Dynamic program over (last change sample, x, b, state). Sums both
/// initial states; each contributes only where the parity allows.
WeightTable weight_table(const TrafficModel& model, int window, double t_s, int max_changes,
                         bool terminal_busy, WeightMode mode);

struct WeightTables {
  WeightTable idle;
  WeightTable busy;
};

/// Both terminal tables from a single pass of the dynamic program.
WeightTables weight_tables(const TrafficModel& model, int window, double t_s, int max_changes,
                           WeightMode mode);

}  // namespace edsense
