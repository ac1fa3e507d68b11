#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fdn/model.hpp"
#include "fdn/platform_sim.hpp"
#include "fdn/sidecar.hpp"

namespace fdn {

class DataPlane;

struct SchedulingDecision {
  std::string request_id;
  std::string policy;
  std::string platform_id;
  std::string node_id;
  std::size_t node_index = 0;
  std::string rationale;
  double decided_at_s = 0.0;
  bool degraded = false;
};

/// Open mode when no secret is configured; otherwise the token must match.
bool authenticate(const AccessControlSettings& access, const std::string& token);

/// Descending by throughput, ties by platform id. Throws ValidationError when
/// a deployed platform has no result.
std::vector<std::string> rank_platforms(const std::map<std::string, double>& throughput,
                                        const std::vector<std::string>& deployed);

/// Smooth weighted round-robin (the nginx interleave): every block of
/// sum(w) consecutive picks over a fixed member set gives member i exactly w_i.
class SmoothWeightedRoundRobin {
 public:
  explicit SmoothWeightedRoundRobin(std::vector<std::pair<std::string, int>> weights);

  /// Picks among the eligible members. A change in the eligible set restarts
  /// the interleave. Returns nullopt when no member is eligible.
  std::optional<std::string> next(const std::set<std::string>& eligible);

 private:
  std::vector<std::pair<std::string, int>> weights_;
  std::vector<long long> current_;
  std::set<std::string> members_;
};

struct Prediction {
  double p90_s = 0.0;
  std::optional<double> energy_j;  // per invocation; nullopt when unavailable
};

/// Picks the target platform per invocation and delegates node choice to the
/// platform's sidecar.
class Scheduler {
 public:
  using Predictor = std::function<Prediction(const std::string& function, const std::string& platform)>;

  /// `platforms` in catalog order; `rank` is the benchmark ranking.
  Scheduler(Policy policy, std::vector<PlatformSim*> platforms, std::vector<std::string> rank,
            const DataPlane* data_plane = nullptr, Predictor predictor = {});

  /// Throws SchedulingError when the function is deployed nowhere. Returns
  /// nullopt when every platform hosting it has failed.
  std::optional<SchedulingDecision> schedule(const std::string& request_id, const std::string& function,
                                             double now_s);

  void mark_failed(const std::string& platform_id);
  void mark_recovered(const std::string& platform_id);
  bool is_failed(const std::string& platform_id) const { return failed_.contains(platform_id); }

  const Policy& policy() const { return policy_; }
  const std::vector<std::string>& rank() const { return rank_; }
  const std::vector<SchedulingDecision>& log() const { return log_; }
  PlatformSim* platform(const std::string& platform_id) const;
  const Sidecar& sidecar(const std::string& platform_id) const { return sidecars_.at(platform_id); }
  void set_predictor(Predictor p) { predictor_ = std::move(p); }

  std::function<void(const SchedulingDecision&)> on_decision;

 private:
  std::vector<std::string> eligible(const std::string& function) const;
  std::pair<std::string, std::string> choose(const std::string& function, const std::vector<std::string>& eligible,
                                             bool& degraded);
  std::string ranked_first(const std::vector<std::string>& candidates) const;
  std::size_t rank_of(const std::string& platform_id) const;

  Policy policy_;
  std::vector<PlatformSim*> platforms_;
  std::vector<std::string> rank_;
  const DataPlane* data_plane_;
  Predictor predictor_;
  std::map<std::string, Sidecar> sidecars_;
  std::set<std::string> failed_;
  std::map<std::string, std::size_t> rr_cursor_;
  std::map<std::string, SmoothWeightedRoundRobin> wrr_;
  std::vector<SchedulingDecision> log_;
};

/// Tab-separated decision log: t_ms, request_id, policy, platform, node, rationale.
std::string decisions_tsv(const std::vector<SchedulingDecision>& decisions);

}  // namespace fdn
