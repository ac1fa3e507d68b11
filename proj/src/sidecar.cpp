#include "fdn/sidecar.hpp"

#include "fdn/errors.hpp"

namespace fdn {

std::size_t Sidecar::select_node(const std::string& function) const {
  const PlatformSim& p = *platform_;
  const FunctionSpec* f = p.function(function);
  if (f == nullptr) throw SchedulingError("function '" + function + "' is not deployed on '" + p.id() + "'");
  const std::size_t n = p.node_count();
  auto id_less = [&](std::size_t a, std::size_t b) { return p.node_spec(a).node_id < p.node_spec(b).node_id; };

  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!p.has_warm_idle(i, function)) continue;
    if (best == n) {
      best = i;
      continue;
    }
    const double ci = p.contention_factor(i), cb = p.contention_factor(best);
    if (ci < cb || (ci == cb && id_less(i, best))) best = i;
  }
  if (best != n) return best;

  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t free = p.free_replica_memory(i);
    if (free < f->replica_memory_mib) continue;
    if (best == n) {
      best = i;
      continue;
    }
    const std::int64_t fb = p.free_replica_memory(best);
    if (free > fb || (free == fb && id_less(i, best))) best = i;
  }
  if (best != n) return best;

  best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t qi = p.queued(i), qb = p.queued(best);
    const double ci = p.contention_factor(i), cb = p.contention_factor(best);
    if (qi < qb || (qi == qb && (ci < cb || (ci == cb && id_less(i, best))))) best = i;
  }
  return best;
}

bool Sidecar::has_capacity(const std::string& function) const {
  const PlatformSim& p = *platform_;
  const FunctionSpec* f = p.function(function);
  if (f == nullptr) return false;
  for (std::size_t i = 0; i < p.node_count(); ++i) {
    if (p.has_warm_idle(i, function) || p.free_replica_memory(i) >= f->replica_memory_mib) return true;
  }
  return false;
}

Sidecar::Placement Sidecar::local_or_delegate(const std::string& function, double predicted_local_p90_s) const {
  if (platform_->failed() || !has_capacity(function)) return Placement::delegate;
  if (local_slo_ && predicted_local_p90_s > local_slo_->p90_response_s) return Placement::delegate;
  return Placement::local;
}

}  // namespace fdn
