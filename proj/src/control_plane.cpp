#include "fdn/control_plane.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "fdn/data_plane.hpp"
#include "fdn/errors.hpp"
#include "text_util.hpp"

namespace fdn {

using detail::num;

bool authenticate(const AccessControlSettings& access, const std::string& token) {
  if (access.secret.empty()) return true;
  return token == access.secret;
}

std::vector<std::string> rank_platforms(const std::map<std::string, double>& throughput,
                                        const std::vector<std::string>& deployed) {
  std::vector<std::string> out = deployed;
  for (const auto& pid : out) {
    if (!throughput.contains(pid)) throw ValidationError("no benchmark result for platform '" + pid + "'");
  }
  std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
    const double ta = throughput.at(a), tb = throughput.at(b);
    if (ta != tb) return ta > tb;
    return a < b;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SmoothWeightedRoundRobin::SmoothWeightedRoundRobin(std::vector<std::pair<std::string, int>> weights)
    : weights_(std::move(weights)), current_(weights_.size(), 0) {
  for (const auto& [pid, w] : weights_) {
    if (w < 1) throw ValidationError("weight for '" + pid + "' must be >= 1");
  }
}

std::optional<std::string> SmoothWeightedRoundRobin::next(const std::set<std::string>& eligible) {
  std::set<std::string> members;
  for (const auto& [pid, w] : weights_) {
    if (eligible.contains(pid)) members.insert(pid);
  }
  if (members.empty()) return std::nullopt;
  if (members != members_) {
    std::fill(current_.begin(), current_.end(), 0);
    members_ = members;
  }
  long long total = 0;
  std::size_t best = weights_.size();
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!members.contains(weights_[i].first)) continue;
    current_[i] += weights_[i].second;
    total += weights_[i].second;
    if (best == weights_.size() || current_[i] > current_[best]) best = i;
  }
  current_[best] -= total;
  return weights_[best].first;
}

Scheduler::Scheduler(Policy policy, std::vector<PlatformSim*> platforms, std::vector<std::string> rank,
                     const DataPlane* data_plane, Predictor predictor)
    : policy_(std::move(policy)),
      platforms_(std::move(platforms)),
      rank_(std::move(rank)),
      data_plane_(data_plane),
      predictor_(std::move(predictor)) {
  for (PlatformSim* p : platforms_) {
    sidecars_.emplace(p->id(), Sidecar(*p));
    if (std::find(rank_.begin(), rank_.end(), p->id()) == rank_.end()) rank_.push_back(p->id());
  }
  if (const auto* rr = std::get_if<RoundRobinCollab>(&policy_); rr != nullptr && rr->platforms.empty()) {
    throw ValidationError("round-robin-collab needs at least one platform");
  }
  if (const auto* w = std::get_if<WeightedCollab>(&policy_)) {
    if (w->weights.empty()) throw ValidationError("weighted-collab needs at least one weight");
    SmoothWeightedRoundRobin check(w->weights);
  }
}

PlatformSim* Scheduler::platform(const std::string& platform_id) const {
  for (PlatformSim* p : platforms_) {
    if (p->id() == platform_id) return p;
  }
  return nullptr;
}

void Scheduler::mark_failed(const std::string& platform_id) { failed_.insert(platform_id); }
void Scheduler::mark_recovered(const std::string& platform_id) { failed_.erase(platform_id); }

std::size_t Scheduler::rank_of(const std::string& platform_id) const {
  auto it = std::find(rank_.begin(), rank_.end(), platform_id);
  return static_cast<std::size_t>(it - rank_.begin());
}

std::string Scheduler::ranked_first(const std::vector<std::string>& candidates) const {
  return *std::min_element(candidates.begin(), candidates.end(),
                           [&](const std::string& a, const std::string& b) { return rank_of(a) < rank_of(b); });
}

std::vector<std::string> Scheduler::eligible(const std::string& function) const {
  std::vector<std::string> out;
  bool anywhere = false;
  for (const std::string& pid : rank_) {
    PlatformSim* p = platform(pid);
    if (p == nullptr || !p->deployed(function)) continue;
    anywhere = true;
    if (!failed_.contains(pid) && !p->failed()) out.push_back(pid);
  }
  if (!anywhere) throw SchedulingError("function '" + function + "' is deployed nowhere");
  return out;
}

std::pair<std::string, std::string> Scheduler::choose(const std::string& function,
                                                      const std::vector<std::string>& candidates, bool& degraded) {
  degraded = false;
  return std::visit(
      [&](const auto& pol) -> std::pair<std::string, std::string> {
        using T = std::decay_t<decltype(pol)>;
        if constexpr (std::is_same_v<T, RankedBest>) {
          const std::string pick = ranked_first(candidates);
          return {pick, "rank " + std::to_string(rank_of(pick) + 1)};
        } else if constexpr (std::is_same_v<T, UtilizationAware>) {
          std::vector<std::string> survivors;
          for (const auto& pid : candidates) {
            const PlatformSim& p = *platform(pid);
            double util = 0.0;
            bool fits = false;
            const std::int64_t footprint = p.function(function)->replica_memory_mib;
            for (std::size_t i = 0; i < p.node_count(); ++i) {
              util += p.utilization(i);
              if (p.free_node_memory(i) >= footprint || p.has_warm_idle(i, function)) fits = true;
            }
            util /= static_cast<double>(p.node_count());
            if (util <= pol.cpu_cutoff_frac && fits) survivors.push_back(pid);
          }
          if (survivors.empty()) {
            degraded = true;
            return {ranked_first(candidates), "no platform under cutoff; ranked fallback"};
          }
          const std::string pick = ranked_first(survivors);
          return {pick, "rank " + std::to_string(rank_of(pick) + 1) + " under cutoff " + num(pol.cpu_cutoff_frac)};
        } else if constexpr (std::is_same_v<T, RoundRobinCollab>) {
          std::size_t& cursor = rr_cursor_[function];
          const auto& list = pol.platforms;
          for (std::size_t step = 0; step < list.size(); ++step) {
            const std::string& pid = list[(cursor + step) % list.size()];
            if (std::find(candidates.begin(), candidates.end(), pid) != candidates.end()) {
              cursor = (cursor + step + 1) % list.size();
              return {pid, "round-robin slot " + std::to_string((cursor + list.size() - 1) % list.size())};
            }
          }
          degraded = true;
          return {ranked_first(candidates), "round-robin list unavailable; ranked fallback"};
        } else if constexpr (std::is_same_v<T, WeightedCollab>) {
          auto it = wrr_.find(function);
          if (it == wrr_.end()) it = wrr_.emplace(function, SmoothWeightedRoundRobin(pol.weights)).first;
          const std::set<std::string> eligible_set(candidates.begin(), candidates.end());
          if (auto pick = it->second.next(eligible_set)) return {*pick, "weighted interleave"};
          degraded = true;
          return {ranked_first(candidates), "weighted members unavailable; ranked fallback"};
        } else if constexpr (std::is_same_v<T, DataLocality>) {
          std::string best;
          double best_cost = std::numeric_limits<double>::infinity();
          const FunctionSpec* f = platform(candidates.front())->function(function);
          for (const auto& pid : candidates) {
            double cost = 0.0;
            if (data_plane_ != nullptr) {
              for (const auto& ref : f->profile.data_objects) {
                const int n = ref.reads_per_invocation + ref.writes_per_invocation;
                cost += n * data_plane_->predicted_latency(ref.object_id, pid);
              }
            }
            if (cost < best_cost || (cost == best_cost && rank_of(pid) < rank_of(best))) {
              best = pid;
              best_cost = cost;
            }
          }
          return {best, "predicted data latency " + num(best_cost) + " s"};
        } else if constexpr (std::is_same_v<T, EnergyAware>) {
          if (!predictor_) throw SchedulingError("energy-aware policy needs a predictor");
          std::string best_energy, best_p90;
          double e_min = std::numeric_limits<double>::infinity();
          double p_min = std::numeric_limits<double>::infinity();
          for (const auto& pid : candidates) {
            const Prediction pr = predictor_(function, pid);
            if (pr.p90_s < p_min || (pr.p90_s == p_min && rank_of(pid) < rank_of(best_p90))) {
              p_min = pr.p90_s;
              best_p90 = pid;
            }
            if (pr.p90_s <= pol.slo.p90_response_s && pr.energy_j) {
              if (*pr.energy_j < e_min || (*pr.energy_j == e_min && rank_of(pid) < rank_of(best_energy))) {
                e_min = *pr.energy_j;
                best_energy = pid;
              }
            }
          }
          if (!best_energy.empty()) return {best_energy, "meets slo, predicted energy " + num(e_min) + " J"};
          degraded = true;
          return {best_p90, "slo unmet everywhere, predicted p90 " + num(p_min) + " s"};
        }
      },
      policy_);
}

std::optional<SchedulingDecision> Scheduler::schedule(const std::string& request_id, const std::string& function,
                                                      double now_s) {
  const std::vector<std::string> candidates = eligible(function);
  if (candidates.empty()) return std::nullopt;
  bool degraded = false;
  auto [pid, rationale] = choose(function, candidates, degraded);
  const Sidecar& sc = sidecars_.at(pid);
  const std::size_t node = sc.select_node(function);
  SchedulingDecision d;
  d.request_id = request_id;
  d.policy = policy_name(policy_);
  d.platform_id = pid;
  d.node_index = node;
  d.node_id = sc.platform().node_spec(node).node_id;
  d.rationale = std::move(rationale);
  d.decided_at_s = now_s;
  d.degraded = degraded;
  log_.push_back(d);
  if (on_decision) on_decision(d);
  return d;
}

std::string decisions_tsv(const std::vector<SchedulingDecision>& decisions) {
  std::ostringstream os;
  os << "t_ms\trequest_id\tpolicy\tplatform\tnode\trationale\n";
  for (const auto& d : decisions) {
    os << to_ms(d.decided_at_s) << '\t' << d.request_id << '\t' << d.policy << '\t' << d.platform_id << '\t'
       << d.node_id << '\t' << d.rationale << '\n';
  }
  return os.str();
}

}  // namespace fdn
