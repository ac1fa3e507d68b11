#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fdn {

enum class PlatformKind { edge, cloud, hpc, public_cloud };
enum class FaasFlavor { warmpool, plain };

/// One power domain (a CPU socket or a board rail) of a node.
struct PowerDomain {
  std::string name;
  double idle_w = 0.0;
  double busy_w = 0.0;

  bool operator==(const PowerDomain&) const = default;
};

struct NodeSpec {
  std::string node_id;
  int cores = 1;
  std::int64_t memory_mib = 1;
  double power_idle_w = 0.0;
  double power_busy_w = 0.0;
  /// Optional breakdown; when present the node totals are the sums.
  std::vector<PowerDomain> power_domains;

  bool operator==(const NodeSpec&) const = default;
};

struct TargetPlatform {
  std::string platform_id;
  PlatformKind kind = PlatformKind::cloud;
  std::vector<NodeSpec> nodes;
  FaasFlavor faas_flavor = FaasFlavor::warmpool;
  double cold_start_s = 5.0;
  bool scale_to_zero = true;
  double inactivity_duration_s = 600.0;
  std::int64_t invoker_memory_mib = 4096;
  std::int64_t max_concurrent_invocations = 99999;

  bool energy_available() const { return kind != PlatformKind::public_cloud; }
  std::int64_t max_node_memory_mib() const;

  bool operator==(const TargetPlatform&) const = default;
};

struct DataObjectRef {
  std::string object_id;
  std::int64_t size_bytes = 1;
  int reads_per_invocation = 0;
  int writes_per_invocation = 0;

  bool operator==(const DataObjectRef&) const = default;
};

struct WorkloadProfile {
  /// Warm execution time on an idle node, per platform.
  std::map<std::string, double> base_service_s;
  double cpu_bound_fraction = 1.0;
  /// Upward-only service jitter: factor drawn uniformly from [1, 1 + jitter_frac].
  double jitter_frac = 0.0;
  std::vector<DataObjectRef> data_objects;
  std::int64_t payload_bytes = 0;

  bool operator==(const WorkloadProfile&) const = default;
};

struct FunctionSpec {
  std::string name;
  std::string runtime;
  WorkloadProfile profile;
  std::int64_t replica_memory_mib = 256;

  bool operator==(const FunctionSpec&) const = default;
};

struct SloSpec {
  double p90_response_s = 7.0;

  bool operator==(const SloSpec&) const = default;
};

enum class Outcome { ok, rejected, failed };

struct InvocationRecord {
  std::string request_id;
  std::string function;
  double issued_at_s = 0.0;
  double started_at_s = 0.0;
  double completed_at_s = 0.0;
  std::string platform_id;
  std::string node_id;
  bool cold_start = false;
  bool retried = false;
  Outcome outcome = Outcome::ok;
  /// Execution time excluding cold start and queueing.
  double exec_time_s = 0.0;
  /// Reason for a non-ok outcome ("denied", "outage", "concurrency-limit", "platform-failed").
  std::string reason;

  double response_time_s() const { return completed_at_s - issued_at_s; }
};

// ---------------------------------------------------------------------------
// Scheduling policies

struct RankedBest {
  bool operator==(const RankedBest&) const = default;
};
struct UtilizationAware {
  double cpu_cutoff_frac = 0.9;
  bool operator==(const UtilizationAware&) const = default;
};
struct RoundRobinCollab {
  std::vector<std::string> platforms;
  bool operator==(const RoundRobinCollab&) const = default;
};
struct WeightedCollab {
  /// Ordered (platform, weight) pairs; the order fixes the interleave tie-break.
  std::vector<std::pair<std::string, int>> weights;
  bool operator==(const WeightedCollab&) const = default;
};
struct DataLocality {
  bool operator==(const DataLocality&) const = default;
};
struct EnergyAware {
  SloSpec slo;
  bool operator==(const EnergyAware&) const = default;
};

using Policy = std::variant<RankedBest, UtilizationAware, RoundRobinCollab, WeightedCollab,
                            DataLocality, EnergyAware>;

/// Canonical CLI/document name ("ranked-best", "weighted-collab", ...).
std::string policy_name(const Policy& policy);

// ---------------------------------------------------------------------------
// Injections

enum class InjectionKind { platform_fail, platform_recover, background_load };

struct InjectionEvent {
  double at_s = 0.0;
  InjectionKind kind = InjectionKind::platform_fail;
  std::string platform_id;
  double cpu_frac = 0.0;
  double mem_frac = 0.0;
  double until_s = 0.0;

  bool operator==(const InjectionEvent&) const = default;
};

using InjectionPlan = std::vector<InjectionEvent>;

// ---------------------------------------------------------------------------
// Data plane configuration

struct ObjectStoreSpec {
  std::string store_id;
  /// Hosting platform id, or "remote" for a store outside every platform.
  std::string host;
  std::vector<std::string> objects;
  std::map<std::string, double> access_latency_s;
  /// Latency from platforms absent from access_latency_s.
  double default_latency_s = 0.5;

  double latency_from(const std::string& platform_id) const;

  bool operator==(const ObjectStoreSpec&) const = default;
};

struct MigrationSettings {
  bool enabled = false;
  int threshold_accesses = 10;
  double min_gain_s = 0.05;

  bool operator==(const MigrationSettings&) const = default;
};

struct DataPlaneConfig {
  std::vector<ObjectStoreSpec> stores;
  std::int64_t cache_capacity_mib = 256;
  double bandwidth_mib_s = 10.0;
  /// Cache-hit latency on platforms that host no store.
  double default_local_latency_s = 0.005;
  MigrationSettings migration;
  bool staging = false;

  bool operator==(const DataPlaneConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Scenario

struct TestSettings {
  int vus = 1;
  double duration_s = 600.0;
  double sleep_s = 0.0;
  std::string param_file;

  bool operator==(const TestSettings&) const = default;
};

struct TestInstance {
  std::string name;
  std::string function;
  TestSettings settings;
  /// Platform where the requests originate; routed through its sidecar first.
  std::string origin_platform;

  bool operator==(const TestInstance&) const = default;
};

struct AccessControlSettings {
  std::string secret;
  std::string client_token;

  bool operator==(const AccessControlSettings&) const = default;
};

struct BenchmarkSettings {
  int vus = 50;
  double duration_s = 60.0;
  /// Pre-measured throughputs; when non-empty no benchmark runs are simulated.
  std::map<std::string, double> results;

  bool operator==(const BenchmarkSettings&) const = default;
};

struct ScenarioConfig {
  std::string test_name;
  std::string catalog_path;
  std::string functions_path;
  std::string annotations_path;
  std::vector<std::string> platform_ids;
  std::vector<TestInstance> instances;
  Policy policy = RankedBest{};
  std::uint64_t seed = 0;
  double sampling_interval_s = 10.0;
  double collection_duration_s = 1200.0;
  AccessControlSettings access_control;
  BenchmarkSettings benchmark;
  DataPlaneConfig data_plane;
  InjectionPlan injections;
  bool prewarm_hints = false;
  std::optional<SloSpec> local_slo;

  /// Distinct functions in instance order.
  std::vector<std::string> function_names() const;

  bool operator==(const ScenarioConfig&) const = default;
};

}  // namespace fdn
