#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fdn/data_plane.hpp"
#include "fdn/model.hpp"
#include "fdn/sim_kernel.hpp"

namespace fdn {

enum class ReplicaState { cold_starting, prewarm, warm_idle, busy, reclaimed };

const char* replica_state_name(ReplicaState s);
/// The replica state machine; everything else is an InvariantViolation.
bool legal_transition(ReplicaState from, ReplicaState to);

/// A request as seen by a platform.
struct Request {
  std::string request_id;
  std::string function;
  SimTime issued_at = 0;
  bool retried = false;
  /// Opaque to the platform; lets the caller route the completion back.
  std::uint64_t tag = 0;
};

struct PowerSample {
  std::string node_id;
  double t_s = 0.0;
  double power_w = 0.0;
};

/// Simulated FaaS platform on a homogeneous cluster.
///
/// Each replica serves one request at a time. A request placed on a node is
/// served by a warm idle replica if one exists, otherwise by a new replica
/// after a cold start (half of it when a prewarm replica of the same runtime
/// is ready), otherwise it waits in a FIFO queue per (node, function).
/// Service time is base_service_s x contention_factor x jitter plus data
/// access latency, fixed when service begins.
class PlatformSim {
 public:
  struct Hooks {
    /// Every finished request, ok or rejected.
    std::function<void(const InvocationRecord&)> on_complete;
    /// Service begins (after any cold start).
    std::function<void(const Request&, std::size_t node, bool cold)> on_start;
    /// Accepted work lost because the platform failed.
    std::function<void(const Request&)> on_abort;
  };

  enum class InvokeResult { started, cold_starting, queued, rejected };

  PlatformSim(Simulator& sim, TargetPlatform platform, std::vector<FunctionSpec> deployed, DataPlane* data_plane,
              std::uint64_t seed, Hooks hooks);
  PlatformSim(const PlatformSim&) = delete;
  PlatformSim& operator=(const PlatformSim&) = delete;

  /// Creates the prewarm pool (warmpool flavor): one replica per runtime per node.
  void deploy();
  /// Deployment-time warm replicas, ready before the load starts. Returns how many fit.
  int prewarm_function(const std::string& function, int count);
  /// Proactive cold starts without a request attached. Returns how many were started.
  int start_replicas(const std::string& function, int count);

  InvokeResult invoke(Request request, std::size_t node);

  double contention_factor(std::size_t node) const;
  double utilization(std::size_t node) const;
  void autoscale_and_reclaim();

  /// Schedules a background load on every node for [from_s, to_s). The memory
  /// share is capped at what existing replicas leave free, so no replica is evicted.
  void apply_background_load(double cpu_frac, double mem_frac, double from_s, double to_s);
  /// Immediate form of apply_background_load; returns the applied memory per node.
  void set_background_load(double cpu_frac, double mem_frac);

  /// Watts at time t; nullopt for platforms without a power model.
  std::optional<double> power_at(std::size_t node, SimTime t) const;
  std::optional<double> energy(SimTime t0, SimTime t1) const;
  double node_energy(std::size_t node, SimTime t0, SimTime t1) const;
  /// Time-averaged utilization over [t0, t1).
  double mean_utilization(std::size_t node, SimTime t0, SimTime t1) const;
  std::vector<PowerSample> power_samples(SimTime t0, SimTime t1) const;

  /// Energy attributed to one execution: the per-core share of idle power plus
  /// the dynamic power of the CPU share the function uses.
  std::optional<double> attributed_energy_j(const std::string& function, double exec_s) const;

  void fail();
  void recover();
  bool failed() const { return failed_; }

  const TargetPlatform& spec() const { return platform_; }
  const std::string& id() const { return platform_.platform_id; }
  std::size_t node_count() const { return nodes_.size(); }
  const NodeSpec& node_spec(std::size_t node) const { return nodes_[node].spec; }
  const FunctionSpec* function(const std::string& name) const;
  bool deployed(const std::string& name) const { return function(name) != nullptr; }

  /// Memory a new replica could claim on the node (invoker pool and physical memory).
  std::int64_t free_replica_memory(std::size_t node) const;
  /// Physical memory not held by replicas or background load.
  std::int64_t free_node_memory(std::size_t node) const;
  bool has_warm_idle(std::size_t node, const std::string& function) const;
  int warm_idle_count(std::size_t node, const std::string& function) const;
  /// Replicas bound to the function in any live state.
  int live_replicas(const std::string& function) const;
  int live_replicas(std::size_t node, const std::string& function) const;
  std::size_t queued(std::size_t node) const;
  std::size_t queued_total() const;
  std::int64_t in_flight() const { return in_flight_; }
  /// Replica slots for `function` once background memory is set aside.
  int serving_capacity(const std::string& function) const;
  std::int64_t memory_allocated_mib() const;
  std::int64_t memory_allocated_mib(std::size_t node) const { return nodes_[node].allocated_mib; }
  std::int64_t background_mem_mib(std::size_t node) const { return nodes_[node].background_mem_mib; }
  double background_cpu_frac(std::size_t node) const { return nodes_[node].background_cpu_frac; }
  int replica_count() const;
  std::uint64_t cold_starts() const { return cold_starts_; }

  /// Throws InvariantViolation on memory overcommit or inconsistent counters.
  void check_invariants() const;

 private:
  struct Work {
    Request request;
    bool cold = false;
    SimTime service_start = 0;
    double exec_s = 0.0;
    EventHandle handle;
  };
  struct Replica {
    std::uint64_t id = 0;
    std::string function;  // empty while prewarm
    std::string runtime;
    std::size_t node = 0;
    ReplicaState state = ReplicaState::cold_starting;
    SimTime last_active = 0;
    std::int64_t memory_mib = 0;
    std::optional<Work> work;
    EventHandle ready_handle;
  };
  struct Node {
    NodeSpec spec;
    double background_cpu_frac = 0.0;
    std::int64_t background_mem_mib = 0;
    std::int64_t allocated_mib = 0;
    double busy_demand = 0.0;
    std::map<std::string, std::deque<Request>> queues;
    std::map<std::string, std::set<std::uint64_t>> warm_idle;
    std::vector<std::pair<SimTime, double>> util_history;
  };

  bool can_allocate(std::size_t node, std::int64_t mib) const;
  Replica& create_replica(std::size_t node, const std::string& function, const std::string& runtime,
                          std::int64_t mib);
  void transition(Replica& r, ReplicaState to);
  void release(Replica& r);
  void begin_service(Replica& r, Request request, bool cold);
  void finish_service(std::uint64_t replica_id);
  void on_replica_ready(std::uint64_t replica_id);
  void replenish_prewarm(std::size_t node, const std::string& runtime);
  Replica* find_prewarm(std::size_t node, const std::string& runtime);
  bool try_place(std::size_t node, Request& request);
  void drain_queues(std::size_t node);
  void record_util(std::size_t node);
  double integrate_util(std::size_t node, SimTime t0, SimTime t1) const;
  double util_at(std::size_t node, SimTime t) const;
  std::size_t pick_node_for_new_replica(std::int64_t mib) const;

  Simulator& sim_;
  TargetPlatform platform_;
  std::vector<FunctionSpec> functions_;
  DataPlane* data_plane_;
  RngStream jitter_;
  Hooks hooks_;
  std::vector<Node> nodes_;
  std::map<std::uint64_t, Replica> replicas_;
  std::uint64_t next_replica_id_ = 1;
  std::int64_t in_flight_ = 0;
  std::uint64_t cold_starts_ = 0;
  std::uint64_t load_token_ = 0;
  bool failed_ = false;
};

}  // namespace fdn
