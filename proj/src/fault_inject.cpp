#include "fdn/fault_inject.hpp"

#include "fdn/scenario.hpp"

namespace fdn {

void apply_plan(Simulator& sim, const InjectionPlan& plan, double collection_duration_s, const FaultTargets& targets) {
  validate_injections(plan, collection_duration_s);
  for (const InjectionEvent& e : plan) {
    switch (e.kind) {
      case InjectionKind::platform_fail:
        sim.schedule_at(e.at_s, "fault.fail", [targets, pid = e.platform_id] { targets.fail(pid); });
        break;
      case InjectionKind::platform_recover:
        sim.schedule_at(e.at_s, "fault.recover", [targets, pid = e.platform_id] { targets.recover(pid); });
        break;
      case InjectionKind::background_load:
        // The platform schedules the start and end of the load itself.
        targets.background_load(e.platform_id, e.cpu_frac, e.mem_frac, e.at_s, e.until_s);
        break;
    }
  }
}

}  // namespace fdn
