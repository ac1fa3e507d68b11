#pragma once

#include <optional>
#include <string>

#include "fdn/model.hpp"
#include "fdn/platform_sim.hpp"

namespace fdn {

/// Platform-local placement: picks the node for a delegated invocation and
/// decides whether a locally triggered invocation stays local.
class Sidecar {
 public:
  enum class Placement { local, delegate };

  explicit Sidecar(const PlatformSim& platform, std::optional<SloSpec> local_slo = std::nullopt)
      : platform_(&platform), local_slo_(local_slo) {}

  /// Warm node with the lowest contention, else the node with the most free
  /// memory that fits a replica, else the least-loaded node (the request queues).
  /// Ties go to the lowest node id.
  std::size_t select_node(const std::string& function) const;

  /// True when some node holds a warm idle replica or can fit a new one.
  bool has_capacity(const std::string& function) const;

  Placement local_or_delegate(const std::string& function, double predicted_local_p90_s) const;

  const PlatformSim& platform() const { return *platform_; }

 private:
  const PlatformSim* platform_;
  std::optional<SloSpec> local_slo_;
};

}  // namespace fdn
