#include "fdn/loadgen.hpp"

#include <algorithm>

#include "fdn/errors.hpp"

namespace fdn {

LoadGenerator::LoadGenerator(Simulator& sim, const std::vector<TestInstance>& instances, Issue issue)
    : sim_(sim), issue_(std::move(issue)) {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const TestInstance& inst = instances[i];
    if (inst.settings.vus < 1) throw ValidationError("test instance '" + inst.name + "' needs vus >= 1");
    instance_names_.push_back(inst.name.empty() ? inst.function : inst.name);
    for (int v = 0; v < inst.settings.vus; ++v) {
      VirtualUser u;
      u.vu_id = vus_.size();
      u.instance = i;
      u.function = inst.function;
      u.sleep_s = inst.settings.sleep_s;
      u.duration_s = inst.settings.duration_s;
      vus_.push_back(u);
    }
  }
}

void LoadGenerator::start() {
  for (auto& u : vus_) {
    const std::size_t id = u.vu_id;
    sim_.schedule_at_ms(sim_.now_ms() + static_cast<SimTime>(id), "vu.issue", [this, id] { fire(id); });
  }
}

void LoadGenerator::fire(std::size_t vu) {
  VirtualUser& u = vus_[vu];
  if (sim_.now_ms() >= to_ms(u.duration_s)) {
    u.state = VuState::done;
    return;
  }
  u.state = VuState::issuing;
  const std::string request_id = instance_names_[u.instance] + "-" + std::to_string(u.vu_id) + "-" + std::to_string(u.issued);
  ++u.issued;
  ++issued_;
  u.state = VuState::waiting;
  issue_(vu, request_id, u.function);
}

void LoadGenerator::complete(std::size_t vu, bool ok) {
  VirtualUser& u = vus_[vu];
  if (u.state != VuState::waiting) return;
  const double pause = ok ? u.sleep_s : std::max(u.sleep_s, kRetryPause_s);
  u.state = VuState::sleeping;
  sim_.schedule_in(pause, "vu.issue", [this, vu] { fire(vu); });
}

std::size_t LoadGenerator::outstanding() const {
  return static_cast<std::size_t>(
      std::count_if(vus_.begin(), vus_.end(), [](const VirtualUser& u) { return u.state == VuState::waiting; }));
}

}  // namespace fdn
