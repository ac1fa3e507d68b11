#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdn/model.hpp"
#include "fdn/time.hpp"

namespace fdn {

/// Nearest-rank percentile: the value at 1-based rank ceil(q*n) of the sorted
/// sample. Empty input has no percentile.
std::optional<double> nearest_rank(std::vector<double> values, double q);
inline std::optional<double> p90(std::vector<double> values) { return nearest_rank(std::move(values), 0.9); }

/// Infrastructure gauges for one platform over one sampling window.
struct InfraSample {
  double cpu_util = 0.0;  // time-averaged, mean over nodes
  std::int64_t memory_mib = 0;  // replica memory held at window end
  double mem_util_frac = 0.0;  // (replica + background memory) / node memory
  int replicas = 0;
  std::int64_t disk_io_bytes = 0;  // bytes moved through the data plane
  std::optional<double> energy_j;
};

struct MetricWindow {
  std::string series;  // platform id, or "all"
  int index = 0;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  std::int64_t requests = 0;  // ok completions
  std::int64_t rejected = 0;
  std::int64_t failed = 0;
  std::int64_t cold_starts = 0;
  std::optional<double> p90_s;
  std::optional<double> mean_response_s;
  std::optional<double> exec_p90_s;
  InfraSample infra;
};

struct SeriesSummary {
  std::string series;
  std::int64_t requests = 0;
  std::int64_t rejected = 0;
  std::int64_t failed = 0;
  std::int64_t cold_starts = 0;
  std::optional<double> p90_s;
  std::optional<double> mean_response_s;
  std::optional<double> energy_j;
  double throughput_rps = 0.0;
};

inline constexpr const char* kAllSeries = "all";

/// Collects invocation records and per-window infrastructure samples.
///
/// A record belongs to the window containing its completion time. Records
/// completing at or after the end of collection are dropped and counted.
class Monitor {
 public:
  Monitor(double sampling_interval_s, double collection_duration_s, std::vector<std::string> platforms);

  void record(const InvocationRecord& rec);
  void sample(const std::string& platform_id, int window, InfraSample s);

  int window_count() const { return window_count_; }
  int window_of(double t_s) const;
  SimTime window_start_ms(int index) const { return interval_ms_ * index; }
  SimTime window_end_ms(int index) const;
  double sampling_interval_s() const { return to_s(interval_ms_); }
  double collection_duration_s() const { return to_s(collection_ms_); }
  const std::vector<std::string>& platforms() const { return platforms_; }

  std::vector<MetricWindow> windows(const std::string& series) const;
  /// Every platform series in catalog order, then the aggregate.
  std::vector<MetricWindow> all_windows() const;
  SeriesSummary summarize(const std::string& series) const;
  std::vector<SeriesSummary> summary() const;

  const std::vector<InvocationRecord>& records() const { return records_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  SimTime interval_ms_;
  SimTime collection_ms_;
  int window_count_;
  std::vector<std::string> platforms_;
  std::vector<InvocationRecord> records_;
  std::map<std::string, std::map<int, InfraSample>> infra_;
  std::uint64_t dropped_ = 0;
};

/// Column order: series,window,t_start_s,t_end_s,requests,rejected,failed,
/// cold_starts,p90_s,mean_response_s,exec_p90_s,cpu_util,mem_util_frac,memory_mib,replicas,disk_io_bytes,energy_j
std::string metrics_csv(const std::vector<MetricWindow>& windows);
std::string metrics_json(const std::vector<MetricWindow>& windows);
std::string summary_json(const std::vector<SeriesSummary>& summary, const std::string& run_id,
                         const std::string& policy, std::uint64_t seed, std::uint64_t dropped);

}  // namespace fdn
