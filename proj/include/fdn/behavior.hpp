#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace fdn {

/// Exponentially weighted execution time and energy per (function, platform).
class PerfModel {
 public:
  struct Entry {
    double ewma_exec_s = 0.0;
    std::optional<double> ewma_energy_j;
    std::int64_t samples = 0;
  };

  explicit PerfModel(double alpha = 0.2);

  /// Throws ValidationError for a non-positive execution time.
  void update(const std::string& function, const std::string& platform, double exec_s,
              std::optional<double> energy_j);
  /// Fallback estimate used until the first sample arrives.
  void set_prior(const std::string& function, const std::string& platform, double exec_s,
                 std::optional<double> energy_j);

  const Entry* find(const std::string& function, const std::string& platform) const;
  /// EWMA when sampled, otherwise the prior; nullopt when neither exists.
  std::optional<double> exec_s(const std::string& function, const std::string& platform) const;
  std::optional<double> energy_j(const std::string& function, const std::string& platform) const;
  double alpha() const { return alpha_; }
  const std::map<std::pair<std::string, std::string>, Entry>& entries() const { return entries_; }

 private:
  double alpha_;
  std::map<std::pair<std::string, std::string>, Entry> entries_;
  std::map<std::pair<std::string, std::string>, Entry> priors_;
};

/// Saturation-scaled P90 estimate: exec x max(1, rate x exec / capacity), plus
/// the cold start when no warm replica is expected. Zero capacity saturates.
double predict_p90(double exec_s, double offered_rate_per_s, int serving_capacity, bool warm_expected,
                   double cold_start_s);

/// Replicas still needed to carry the forecast load: ceil(rate x exec) - warm, floored at 0.
int prewarm_hint(double forecast_rate_per_s, double exec_s, int warm_replicas);

/// Invocation counts per window for each (function, platform).
class EventModel {
 public:
  void count(const std::string& function, const std::string& platform);
  /// Closes the current window, converting counts into rates.
  void end_window(double interval_s);

  int windows() const { return windows_; }
  /// Rates of every closed window, oldest first.
  std::vector<double> rates(const std::string& function, const std::string& platform) const;
  /// Mean rate of the last three windows; nullopt before three windows exist.
  std::optional<double> forecast(const std::string& function, const std::string& platform) const;
  std::vector<std::pair<std::string, std::string>> keys() const;

 private:
  int windows_ = 0;
  std::map<std::pair<std::string, std::string>, std::int64_t> current_;
  std::map<std::pair<std::string, std::string>, std::vector<double>> history_;
};

struct PrewarmHint {
  std::string function;
  std::string platform;
  int replicas = 0;
};

/// Read/write counters per (function, object, platform), per window.
class DataAccessModel {
 public:
  struct Counters {
    std::int64_t reads = 0;
    std::int64_t writes = 0;
  };
  using Key = std::tuple<std::string, std::string, std::string>;

  void record(const std::string& function, const std::string& object, const std::string& platform, bool write);
  void end_window();
  Counters total(const std::string& function, const std::string& object, const std::string& platform) const;
  const std::vector<std::map<Key, Counters>>& history() const { return history_; }

 private:
  std::map<Key, Counters> current_;
  std::map<Key, Counters> totals_;
  std::vector<std::map<Key, Counters>> history_;
};

/// Producer-to-consumer edges observed through shared data objects.
class InteractionModel {
 public:
  explicit InteractionModel(std::int64_t threshold = 100) : threshold_(threshold) {}

  /// Returns true when this call pushes the edge past the threshold for the first time.
  bool record(const std::string& producer, const std::string& consumer);
  std::int64_t weight(const std::string& producer, const std::string& consumer) const;
  const std::map<std::pair<std::string, std::string>, std::int64_t>& edges() const { return edges_; }
  /// Co-location recommendations in the order they were crossed.
  const std::vector<std::pair<std::string, std::string>>& recommendations() const { return recommended_; }
  std::int64_t threshold() const { return threshold_; }

 private:
  std::int64_t threshold_;
  std::map<std::pair<std::string, std::string>, std::int64_t> edges_;
  std::vector<std::pair<std::string, std::string>> recommended_;
};

struct BehaviorModels {
  PerfModel perf;
  EventModel events;
  DataAccessModel data;
  InteractionModel interactions;

  /// JSON snapshot for the knowledge store, tagged with the window index.
  std::string snapshot_json(int window) const;
};

}  // namespace fdn
