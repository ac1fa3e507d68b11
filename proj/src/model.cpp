#include "fdn/model.hpp"

#include <algorithm>

namespace fdn {

std::string policy_name(const Policy& policy) {
  struct Visitor {
    std::string operator()(const RankedBest&) const { return "ranked-best"; }
    std::string operator()(const UtilizationAware&) const { return "utilization-aware"; }
    std::string operator()(const RoundRobinCollab&) const { return "round-robin-collab"; }
    std::string operator()(const WeightedCollab&) const { return "weighted-collab"; }
    std::string operator()(const DataLocality&) const { return "data-locality"; }
    std::string operator()(const EnergyAware&) const { return "energy-aware"; }
  };
  return std::visit(Visitor{}, policy);
}

double ObjectStoreSpec::latency_from(const std::string& platform_id) const {
  auto it = access_latency_s.find(platform_id);
  return it == access_latency_s.end() ? default_latency_s : it->second;
}

std::vector<std::string> ScenarioConfig::function_names() const {
  std::vector<std::string> out;
  for (const auto& inst : instances) {
    if (std::find(out.begin(), out.end(), inst.function) == out.end()) out.push_back(inst.function);
  }
  return out;
}

}  // namespace fdn
