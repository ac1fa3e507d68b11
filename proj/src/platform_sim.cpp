#include "fdn/platform_sim.hpp"

#include <algorithm>
#include <cmath>

#include "fdn/errors.hpp"

namespace fdn {

namespace {

// Durations round up so every service or start-up takes at least as long as modelled.
SimTime ceil_ms(double seconds) {
  const double ms = seconds * 1000.0;
  const double r = std::round(ms);
  if (std::abs(ms - r) < 1e-6) return static_cast<SimTime>(r);
  return static_cast<SimTime>(std::ceil(ms));
}

}  // namespace

const char* replica_state_name(ReplicaState s) {
  switch (s) {
    case ReplicaState::cold_starting: return "cold_starting";
    case ReplicaState::prewarm: return "prewarm";
    case ReplicaState::warm_idle: return "warm_idle";
    case ReplicaState::busy: return "busy";
    case ReplicaState::reclaimed: return "reclaimed";
  }
  return "?";
}

bool legal_transition(ReplicaState from, ReplicaState to) {
  using S = ReplicaState;
  if (to == S::reclaimed) return from != S::reclaimed;
  switch (from) {
    case S::cold_starting: return to == S::prewarm || to == S::warm_idle || to == S::busy;
    case S::prewarm: return to == S::cold_starting;
    case S::warm_idle: return to == S::busy;
    case S::busy: return to == S::warm_idle;
    case S::reclaimed: return false;
  }
  return false;
}

PlatformSim::PlatformSim(Simulator& sim, TargetPlatform platform, std::vector<FunctionSpec> deployed,
                         DataPlane* data_plane, std::uint64_t seed, Hooks hooks)
    : sim_(sim),
      platform_(std::move(platform)),
      functions_(std::move(deployed)),
      data_plane_(data_plane),
      jitter_(seed, "jitter/" + platform_.platform_id),
      hooks_(std::move(hooks)) {
  for (const auto& n : platform_.nodes) {
    Node node;
    node.spec = n;
    node.util_history.emplace_back(sim_.now_ms(), 0.0);
    nodes_.push_back(std::move(node));
  }
}

const FunctionSpec* PlatformSim::function(const std::string& name) const {
  for (const auto& f : functions_) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

void PlatformSim::deploy() {
  if (platform_.faas_flavor != FaasFlavor::warmpool) return;
  std::set<std::string> runtimes;
  for (const auto& f : functions_) runtimes.insert(f.runtime);
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    for (const auto& rt : runtimes) replenish_prewarm(n, rt);
  }
}

std::size_t PlatformSim::pick_node_for_new_replica(std::int64_t mib) const {
  std::size_t best = nodes_.size();
  std::int64_t best_free = -1;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const std::int64_t free = free_replica_memory(n);
    if (free >= mib && free > best_free) {
      best = n;
      best_free = free;
    }
  }
  return best;
}

int PlatformSim::prewarm_function(const std::string& name, int count) {
  const FunctionSpec* f = function(name);
  if (f == nullptr || failed_) return 0;
  int made = 0;
  for (; made < count; ++made) {
    const std::size_t n = pick_node_for_new_replica(f->replica_memory_mib);
    if (n == nodes_.size()) break;
    Replica& r = create_replica(n, f->name, f->runtime, f->replica_memory_mib);
    transition(r, ReplicaState::warm_idle);
    r.last_active = sim_.now_ms();
    nodes_[n].warm_idle[f->name].insert(r.id);
  }
  return made;
}

int PlatformSim::start_replicas(const std::string& name, int count) {
  const FunctionSpec* f = function(name);
  if (f == nullptr || failed_) return 0;
  int made = 0;
  for (; made < count; ++made) {
    const std::size_t n = pick_node_for_new_replica(f->replica_memory_mib);
    if (n == nodes_.size()) break;
    Replica& r = create_replica(n, f->name, f->runtime, f->replica_memory_mib);
    const std::uint64_t id = r.id;
    ++cold_starts_;
    r.ready_handle = sim_.schedule_at_ms(sim_.now_ms() + ceil_ms(platform_.cold_start_s), "replica.ready",
                                         [this, id] { on_replica_ready(id); });
  }
  return made;
}

bool PlatformSim::can_allocate(std::size_t node, std::int64_t mib) const { return free_replica_memory(node) >= mib; }

std::int64_t PlatformSim::free_replica_memory(std::size_t node) const {
  const Node& n = nodes_[node];
  const std::int64_t pool = platform_.invoker_memory_mib - n.allocated_mib;
  const std::int64_t physical = n.spec.memory_mib - n.background_mem_mib - n.allocated_mib;
  return std::max<std::int64_t>(0, std::min(pool, physical));
}

std::int64_t PlatformSim::free_node_memory(std::size_t node) const {
  const Node& n = nodes_[node];
  return n.spec.memory_mib - n.background_mem_mib - n.allocated_mib;
}

PlatformSim::Replica& PlatformSim::create_replica(std::size_t node, const std::string& fn, const std::string& runtime,
                                                  std::int64_t mib) {
  if (!can_allocate(node, mib)) {
    throw InvariantViolation("replica allocation would overcommit memory on " + nodes_[node].spec.node_id);
  }
  Replica r;
  r.id = next_replica_id_++;
  r.function = fn;
  r.runtime = runtime;
  r.node = node;
  r.state = ReplicaState::cold_starting;
  r.last_active = sim_.now_ms();
  r.memory_mib = mib;
  nodes_[node].allocated_mib += mib;
  return replicas_.emplace(r.id, std::move(r)).first->second;
}

void PlatformSim::transition(Replica& r, ReplicaState to) {
  if (!legal_transition(r.state, to)) {
    throw InvariantViolation(std::string("illegal replica transition ") + replica_state_name(r.state) + " -> " +
                             replica_state_name(to));
  }
  r.state = to;
}

void PlatformSim::release(Replica& r) {
  transition(r, ReplicaState::reclaimed);
  Node& n = nodes_[r.node];
  n.allocated_mib -= r.memory_mib;
  if (!r.function.empty()) n.warm_idle[r.function].erase(r.id);
  replicas_.erase(r.id);
}

PlatformSim::Replica* PlatformSim::find_prewarm(std::size_t node, const std::string& runtime) {
  for (auto& [id, r] : replicas_) {
    if (r.node == node && r.state == ReplicaState::prewarm && r.runtime == runtime) return &r;
  }
  return nullptr;
}

void PlatformSim::replenish_prewarm(std::size_t node, const std::string& runtime) {
  if (platform_.faas_flavor != FaasFlavor::warmpool || failed_) return;
  for (const auto& [id, r] : replicas_) {
    if (r.node == node && r.function.empty() && r.runtime == runtime) return;
  }
  std::int64_t mib = 0;
  for (const auto& f : functions_) {
    if (f.runtime == runtime) mib = std::max(mib, f.replica_memory_mib);
  }
  if (mib == 0 || !can_allocate(node, mib)) return;
  Replica& r = create_replica(node, "", runtime, mib);
  const std::uint64_t id = r.id;
  r.ready_handle = sim_.schedule_at_ms(sim_.now_ms() + ceil_ms(platform_.cold_start_s), "replica.prewarm",
                                       [this, id] {
                                         auto it = replicas_.find(id);
                                         if (it == replicas_.end()) return;
                                         transition(it->second, ReplicaState::prewarm);
                                         drain_queues(it->second.node);
                                       });
}

PlatformSim::InvokeResult PlatformSim::invoke(Request request, std::size_t node) {
  if (failed_) throw SchedulingError("platform '" + id() + "' is failed");
  if (node >= nodes_.size()) throw SchedulingError("node index out of range on '" + id() + "'");
  if (!deployed(request.function)) {
    throw SchedulingError("function '" + request.function + "' is not deployed on '" + id() + "'");
  }
  if (in_flight_ >= platform_.max_concurrent_invocations) {
    InvocationRecord rec;
    rec.request_id = request.request_id;
    rec.function = request.function;
    rec.issued_at_s = to_s(request.issued_at);
    rec.started_at_s = sim_.now();
    rec.completed_at_s = sim_.now();
    rec.platform_id = id();
    rec.node_id = nodes_[node].spec.node_id;
    rec.retried = request.retried;
    rec.outcome = Outcome::rejected;
    rec.reason = "concurrency-limit";
    if (hooks_.on_complete) hooks_.on_complete(rec);
    return InvokeResult::rejected;
  }
  ++in_flight_;
  const bool had_warm = has_warm_idle(node, request.function);
  if (try_place(node, request)) return had_warm ? InvokeResult::started : InvokeResult::cold_starting;
  nodes_[node].queues[request.function].push_back(std::move(request));
  return InvokeResult::queued;
}

bool PlatformSim::try_place(std::size_t node, Request& request) {
  Node& n = nodes_[node];
  const FunctionSpec& f = *function(request.function);
  auto& idle = n.warm_idle[f.name];
  if (!idle.empty()) {
    const std::uint64_t rid = *idle.begin();
    idle.erase(idle.begin());
    begin_service(replicas_.at(rid), std::move(request), false);
    return true;
  }
  if (Replica* pw = find_prewarm(node, f.runtime); pw != nullptr && pw->memory_mib >= f.replica_memory_mib) {
    transition(*pw, ReplicaState::cold_starting);
    pw->function = f.name;
    pw->work = Work{std::move(request), true, 0, 0.0, {}};
    ++cold_starts_;
    const std::uint64_t rid = pw->id;
    pw->ready_handle = sim_.schedule_at_ms(sim_.now_ms() + ceil_ms(platform_.cold_start_s / 2.0), "replica.ready",
                                           [this, rid] { on_replica_ready(rid); });
    replenish_prewarm(node, f.runtime);
    return true;
  }
  if (can_allocate(node, f.replica_memory_mib)) {
    Replica& r = create_replica(node, f.name, f.runtime, f.replica_memory_mib);
    r.work = Work{std::move(request), true, 0, 0.0, {}};
    ++cold_starts_;
    const std::uint64_t rid = r.id;
    r.ready_handle = sim_.schedule_at_ms(sim_.now_ms() + ceil_ms(platform_.cold_start_s), "replica.ready",
                                         [this, rid] { on_replica_ready(rid); });
    return true;
  }
  return false;
}

void PlatformSim::on_replica_ready(std::uint64_t replica_id) {
  auto it = replicas_.find(replica_id);
  if (it == replicas_.end()) return;
  Replica& r = it->second;
  r.ready_handle = {};
  if (r.work) {
    Request req = std::move(r.work->request);
    r.work.reset();
    begin_service(r, std::move(req), true);
    return;
  }
  transition(r, ReplicaState::warm_idle);
  r.last_active = sim_.now_ms();
  nodes_[r.node].warm_idle[r.function].insert(r.id);
  drain_queues(r.node);
}

void PlatformSim::begin_service(Replica& r, Request request, bool cold) {
  transition(r, ReplicaState::busy);
  Node& n = nodes_[r.node];
  const FunctionSpec& f = *function(request.function);
  n.busy_demand += f.profile.cpu_bound_fraction;
  record_util(r.node);
  double data_latency = 0.0;
  if (data_plane_ != nullptr && !f.profile.data_objects.empty()) data_latency = data_plane_->access_all(f, id());
  double jitter = 1.0;
  if (f.profile.jitter_frac > 0.0) jitter += f.profile.jitter_frac * jitter_.uniform();
  const double exec = f.profile.base_service_s.at(id()) * contention_factor(r.node) * jitter + data_latency;
  const SimTime start = sim_.now_ms();
  const SimTime end = start + std::max<SimTime>(1, ceil_ms(exec));
  const std::uint64_t rid = r.id;
  if (hooks_.on_start) hooks_.on_start(request, r.node, cold);
  r.work = Work{std::move(request), cold, start, to_s(end - start), {}};
  r.work->handle = sim_.schedule_at_ms(end, "replica.done", [this, rid] { finish_service(rid); });
}

void PlatformSim::finish_service(std::uint64_t replica_id) {
  Replica& r = replicas_.at(replica_id);
  Work work = std::move(*r.work);
  r.work.reset();
  const FunctionSpec& f = *function(work.request.function);
  Node& n = nodes_[r.node];
  n.busy_demand = std::max(0.0, n.busy_demand - f.profile.cpu_bound_fraction);
  transition(r, ReplicaState::warm_idle);
  r.last_active = sim_.now_ms();
  n.warm_idle[r.function].insert(r.id);
  --in_flight_;

  InvocationRecord rec;
  rec.request_id = work.request.request_id;
  rec.function = work.request.function;
  rec.issued_at_s = to_s(work.request.issued_at);
  rec.started_at_s = to_s(work.service_start);
  rec.completed_at_s = sim_.now();
  rec.platform_id = id();
  rec.node_id = n.spec.node_id;
  rec.cold_start = work.cold;
  rec.retried = work.request.retried;
  rec.outcome = Outcome::ok;
  rec.exec_time_s = work.exec_s;

  // Waiting requests get the freed replica before the completion can trigger new arrivals.
  const std::size_t node = r.node;
  drain_queues(node);
  record_util(node);
  if (hooks_.on_complete) hooks_.on_complete(rec);
}

void PlatformSim::drain_queues(std::size_t node) {
  if (failed_) return;
  Node& n = nodes_[node];
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto& [fn, q] : n.queues) {
      while (!q.empty()) {
        if (!try_place(node, q.front())) break;
        q.pop_front();
        progress = true;
      }
    }
  }
}

double PlatformSim::contention_factor(std::size_t node) const {
  const Node& n = nodes_[node];
  const double cores = n.spec.cores;
  return std::max(1.0, (n.busy_demand + n.background_cpu_frac * cores) / cores);
}

double PlatformSim::utilization(std::size_t node) const {
  const Node& n = nodes_[node];
  const double cores = n.spec.cores;
  return std::min(1.0, (n.busy_demand + n.background_cpu_frac * cores) / cores);
}

void PlatformSim::record_util(std::size_t node) {
  Node& n = nodes_[node];
  const double u = utilization(node);
  const SimTime t = sim_.now_ms();
  if (!n.util_history.empty() && n.util_history.back().first == t) {
    n.util_history.back().second = u;
    if (n.util_history.size() >= 2 && n.util_history[n.util_history.size() - 2].second == u) {
      n.util_history.pop_back();
    }
    return;
  }
  if (!n.util_history.empty() && n.util_history.back().second == u) return;
  n.util_history.emplace_back(t, u);
}

double PlatformSim::util_at(std::size_t node, SimTime t) const {
  const auto& h = nodes_[node].util_history;
  auto it = std::upper_bound(h.begin(), h.end(), t, [](SimTime v, const auto& e) { return v < e.first; });
  if (it == h.begin()) return 0.0;
  return std::prev(it)->second;
}

// Integral of utilization over [t0, t1) in seconds.
double PlatformSim::integrate_util(std::size_t node, SimTime t0, SimTime t1) const {
  if (t1 <= t0) return 0.0;
  const auto& h = nodes_[node].util_history;
  auto it = std::upper_bound(h.begin(), h.end(), t0, [](SimTime v, const auto& e) { return v < e.first; });
  double u = it == h.begin() ? 0.0 : std::prev(it)->second;
  SimTime cursor = t0;
  double total_ms = 0.0;
  for (; it != h.end() && it->first < t1; ++it) {
    total_ms += u * static_cast<double>(it->first - cursor);
    cursor = it->first;
    u = it->second;
  }
  total_ms += u * static_cast<double>(t1 - cursor);
  return total_ms / 1000.0;
}

double PlatformSim::mean_utilization(std::size_t node, SimTime t0, SimTime t1) const {
  if (t1 <= t0) return util_at(node, t0);
  return integrate_util(node, t0, t1) / to_s(t1 - t0);
}

std::optional<double> PlatformSim::power_at(std::size_t node, SimTime t) const {
  if (!platform_.energy_available()) return std::nullopt;
  const NodeSpec& s = nodes_[node].spec;
  const double u = util_at(node, t);
  return s.power_idle_w * (1.0 - u) + s.power_busy_w * u;
}

double PlatformSim::node_energy(std::size_t node, SimTime t0, SimTime t1) const {
  if (t1 <= t0) return 0.0;
  const NodeSpec& s = nodes_[node].spec;
  const double busy_s = integrate_util(node, t0, t1);
  const double span_s = to_s(t1 - t0);
  return s.power_idle_w * (span_s - busy_s) + s.power_busy_w * busy_s;
}

std::optional<double> PlatformSim::energy(SimTime t0, SimTime t1) const {
  if (!platform_.energy_available()) return std::nullopt;
  double total = 0.0;
  for (std::size_t n = 0; n < nodes_.size(); ++n) total += node_energy(n, t0, t1);
  return total;
}

std::vector<PowerSample> PlatformSim::power_samples(SimTime t0, SimTime t1) const {
  std::vector<PowerSample> out;
  if (!platform_.energy_available() || t1 <= t0) return out;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    out.push_back(PowerSample{nodes_[n].spec.node_id, to_s(t1), node_energy(n, t0, t1) / to_s(t1 - t0)});
  }
  return out;
}

std::optional<double> PlatformSim::attributed_energy_j(const std::string& name, double exec_s) const {
  if (!platform_.energy_available() || nodes_.empty()) return std::nullopt;
  const FunctionSpec* f = function(name);
  const double cpu = f != nullptr ? f->profile.cpu_bound_fraction : 1.0;
  double idle = 0.0, busy = 0.0, cores = 0.0;
  for (const auto& n : nodes_) {
    idle += n.spec.power_idle_w;
    busy += n.spec.power_busy_w;
    cores += n.spec.cores;
  }
  return exec_s * (idle / cores + (busy - idle) * cpu / cores);
}

void PlatformSim::autoscale_and_reclaim() {
  if (failed_) return;
  if (platform_.scale_to_zero) {
    const SimTime limit = ceil_ms(platform_.inactivity_duration_s);
    std::vector<std::uint64_t> victims;
    for (const auto& [rid, r] : replicas_) {
      if (r.state == ReplicaState::warm_idle && sim_.now_ms() - r.last_active > limit) victims.push_back(rid);
    }
    for (auto rid : victims) release(replicas_.at(rid));
  }
  for (std::size_t n = 0; n < nodes_.size(); ++n) drain_queues(n);
}

void PlatformSim::set_background_load(double cpu_frac, double mem_frac) {
  if (!(cpu_frac >= 0.0 && cpu_frac <= 1.0) || !(mem_frac >= 0.0 && mem_frac <= 1.0)) {
    throw ValidationError("background load fractions must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    Node& n = nodes_[i];
    n.background_cpu_frac = cpu_frac;
    const auto wanted = static_cast<std::int64_t>(std::llround(mem_frac * static_cast<double>(n.spec.memory_mib)));
    n.background_mem_mib = std::min(wanted, n.spec.memory_mib - n.allocated_mib);
    record_util(i);
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) drain_queues(i);
}

void PlatformSim::apply_background_load(double cpu_frac, double mem_frac, double from_s, double to_s_) {
  if (!(cpu_frac >= 0.0 && cpu_frac <= 1.0) || !(mem_frac >= 0.0 && mem_frac <= 1.0)) {
    throw ValidationError("background load fractions must lie in [0, 1]");
  }
  if (to_s_ < from_s) throw ValidationError("background load ends before it starts");
  const std::uint64_t token = ++load_token_;
  sim_.schedule_at(from_s, "load.start", [this, cpu_frac, mem_frac, token] {
    if (token == load_token_) set_background_load(cpu_frac, mem_frac);
  });
  sim_.schedule_at(to_s_, "load.end", [this, token] {
    if (token == load_token_) set_background_load(0.0, 0.0);
  });
}

void PlatformSim::fail() {
  if (failed_) return;
  failed_ = true;
  std::vector<Request> lost;
  for (auto& [rid, r] : replicas_) {
    if (r.ready_handle.valid()) sim_.cancel(r.ready_handle);
    if (r.work) {
      if (r.work->handle.valid()) sim_.cancel(r.work->handle);
      lost.push_back(std::move(r.work->request));
    }
  }
  for (auto& n : nodes_) {
    for (auto& [fn, q] : n.queues) {
      for (auto& req : q) lost.push_back(std::move(req));
      q.clear();
    }
  }
  std::vector<std::uint64_t> ids;
  for (const auto& [rid, r] : replicas_) ids.push_back(rid);
  for (auto rid : ids) release(replicas_.at(rid));
  in_flight_ = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    nodes_[i].busy_demand = 0.0;
    record_util(i);
  }
  if (hooks_.on_abort) {
    for (const auto& req : lost) hooks_.on_abort(req);
  }
}

void PlatformSim::recover() {
  if (!failed_) return;
  failed_ = false;
  deploy();
}

bool PlatformSim::has_warm_idle(std::size_t node, const std::string& fn) const { return warm_idle_count(node, fn) > 0; }

int PlatformSim::warm_idle_count(std::size_t node, const std::string& fn) const {
  auto it = nodes_[node].warm_idle.find(fn);
  return it == nodes_[node].warm_idle.end() ? 0 : static_cast<int>(it->second.size());
}

int PlatformSim::live_replicas(const std::string& fn) const {
  int count = 0;
  for (const auto& [rid, r] : replicas_) count += r.function == fn ? 1 : 0;
  return count;
}

int PlatformSim::live_replicas(std::size_t node, const std::string& fn) const {
  int count = 0;
  for (const auto& [rid, r] : replicas_) count += (r.node == node && r.function == fn) ? 1 : 0;
  return count;
}

std::size_t PlatformSim::queued(std::size_t node) const {
  std::size_t total = 0;
  for (const auto& [fn, q] : nodes_[node].queues) total += q.size();
  return total;
}

std::size_t PlatformSim::queued_total() const {
  std::size_t total = 0;
  for (std::size_t n = 0; n < nodes_.size(); ++n) total += queued(n);
  return total;
}

int PlatformSim::serving_capacity(const std::string& fn) const {
  const FunctionSpec* f = function(fn);
  if (f == nullptr || f->replica_memory_mib <= 0) return 0;
  std::int64_t slots = 0;
  for (const auto& n : nodes_) {
    const std::int64_t mem = std::min(platform_.invoker_memory_mib, n.spec.memory_mib - n.background_mem_mib);
    slots += std::max<std::int64_t>(0, mem / f->replica_memory_mib);
  }
  return static_cast<int>(std::min<std::int64_t>(slots, 1 << 30));
}

std::int64_t PlatformSim::memory_allocated_mib() const {
  std::int64_t total = 0;
  for (const auto& n : nodes_) total += n.allocated_mib;
  return total;
}

int PlatformSim::replica_count() const { return static_cast<int>(replicas_.size()); }

void PlatformSim::check_invariants() const {
  std::vector<std::int64_t> mem(nodes_.size(), 0);
  std::int64_t active = 0;
  for (const auto& [rid, r] : replicas_) {
    mem[r.node] += r.memory_mib;
    if (r.work) ++active;
    if (r.state == ReplicaState::busy && !r.work) throw InvariantViolation("busy replica without work");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (mem[i] != n.allocated_mib) throw InvariantViolation("allocation counter drift on " + n.spec.node_id);
    if (n.allocated_mib > platform_.invoker_memory_mib) {
      throw InvariantViolation("invoker memory overcommitted on " + n.spec.node_id);
    }
    if (n.allocated_mib + n.background_mem_mib > n.spec.memory_mib) {
      throw InvariantViolation("node memory overcommitted on " + n.spec.node_id);
    }
  }
  if (active + static_cast<std::int64_t>(queued_total()) != in_flight_) {
    throw InvariantViolation("in-flight count does not match replicas and queues on " + id());
  }
}

}  // namespace fdn
