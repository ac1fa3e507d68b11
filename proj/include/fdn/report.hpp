#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fdn {

/// Metrics that compare accepts; each is a column of metrics.json.
const std::vector<std::string>& comparable_metrics();

struct RunColumn {
  std::string label;
  /// Summary value per series (sum over windows for counters, the run-level
  /// P90 for p90_s, the window mean for utilization gauges).
  std::vector<std::pair<std::string, std::optional<double>>> totals;
};

struct Comparison {
  std::string metric;
  std::vector<RunColumn> runs;
  /// Plot-ready CSV: series,window,t_start_s,<label>...,delta_<label>... (deltas versus the first run).
  std::string csv;
  /// Human-readable summary with deltas and ratios versus the first run.
  std::string table;
};

/// Aligns the per-window series of completed run directories. Throws
/// ValidationError for fewer than two runs, unknown metrics or runs with
/// different sampling intervals.
Comparison compare_runs(const std::vector<std::filesystem::path>& run_dirs, const std::string& metric);

/// Name, parameters and parameter schema of every scheduling policy.
std::string list_policies_text();
std::size_t policy_count();

}  // namespace fdn
