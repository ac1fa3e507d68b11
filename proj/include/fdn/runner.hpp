#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fdn/catalog.hpp"
#include "fdn/control_plane.hpp"
#include "fdn/data_plane.hpp"
#include "fdn/knowledge.hpp"
#include "fdn/model.hpp"
#include "fdn/monitoring.hpp"
#include "fdn/platform_sim.hpp"

namespace fdn {

struct RunOptions {
  /// Output directory; empty keeps everything in memory.
  std::string out_dir;
  /// Write trace.tsv with every dispatched event.
  bool trace = false;
  /// Check platform invariants after every placement and completion.
  bool paranoid = false;
  /// Annotated deployment to apply; overrides the scenario's "annotations".
  std::string annotations_path;
};

/// Request accounting over the whole run. At the end,
/// issued = ok + rejected + failed + in_flight + queued.
struct RunTotals {
  std::uint64_t issued = 0;
  std::uint64_t ok = 0;
  std::uint64_t rejected = 0;
  std::uint64_t failed = 0;
  std::uint64_t in_flight = 0;  // accepted, not finished, not waiting in a queue
  std::uint64_t queued = 0;
  std::uint64_t denied = 0;
  std::uint64_t outage = 0;
  std::uint64_t retried = 0;
};

struct Migration {
  double t_s = 0.0;
  std::string object_id;
  std::string to_platform;
};

struct RunResult {
  std::string run_id;
  std::string policy;
  std::uint64_t seed = 0;
  double sampling_interval_s = 10.0;
  double collection_duration_s = 1200.0;
  std::vector<std::string> platforms;
  std::vector<std::string> rank;
  std::map<std::string, double> benchmark;
  /// Every finished request, including those completing after collection ended.
  std::vector<InvocationRecord> records;
  std::vector<MetricWindow> windows;
  std::vector<SeriesSummary> summary;
  std::uint64_t dropped = 0;
  std::vector<SchedulingDecision> decisions;
  std::vector<DataAccess> data_log;
  std::vector<PowerSample> power;
  std::vector<KnowledgeRecord> knowledge;
  std::vector<Migration> migrations;
  RunTotals totals;
  std::vector<std::string> warnings;

  std::vector<MetricWindow> series(const std::string& name) const;
  const SeriesSummary& summary_for(const std::string& name) const;
};

/// Throughput per platform for the ranking: the scenario's benchmark results
/// when given, otherwise an isolated simulated load test of the scenario's
/// first function on each platform.
std::map<std::string, double> benchmark_platforms(const ScenarioConfig& scenario, const Catalog& catalog);

/// Runs the full lifecycle: deploy, benchmark, load, collect, tear down.
/// Throws ValidationError for bad input and InvariantViolation when the
/// simulation breaks conservation or memory safety.
RunResult run_scenario(const ScenarioConfig& scenario, const Catalog& catalog, const RunOptions& options = {});

/// Writes metrics.csv, metrics.json, decisions.tsv, power.csv,
/// data_access.csv, invocations.csv and summary.json into `out_dir`.
void write_outputs(const RunResult& result, const std::filesystem::path& out_dir);

/// Run id derived from test name and seed; stable across reruns.
std::string make_run_id(const std::string& test_name, std::uint64_t seed);

}  // namespace fdn
