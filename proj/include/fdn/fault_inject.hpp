#pragma once

#include <functional>
#include <string>

#include "fdn/model.hpp"
#include "fdn/sim_kernel.hpp"

namespace fdn {

/// What an injection plan acts upon.
struct FaultTargets {
  std::function<void(const std::string& platform)> fail;
  std::function<void(const std::string& platform)> recover;
  std::function<void(const std::string& platform, double cpu_frac, double mem_frac, double from_s, double to_s)>
      background_load;
};

/// Validates the plan against the collection window and schedules its events
/// on the kernel. Throws ValidationError on a recover without a prior fail,
/// out-of-window times or load fractions outside [0, 1].
void apply_plan(Simulator& sim, const InjectionPlan& plan, double collection_duration_s, const FaultTargets& targets);

}  // namespace fdn
