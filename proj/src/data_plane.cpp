#include "fdn/data_plane.hpp"

#include <algorithm>

#include "fdn/errors.hpp"

namespace fdn {

namespace {
constexpr double kMib = 1024.0 * 1024.0;
}

bool ObjectCache::touch(const std::string& object_id) {
  auto it = index_.find(object_id);
  if (it == index_.end()) return false;
  lru_.splice(lru_.begin(), lru_, it->second);
  return true;
}

bool ObjectCache::insert(const std::string& object_id, std::int64_t bytes) {
  if (bytes > capacity_) return false;
  erase(object_id);
  while (used_ + bytes > capacity_) {
    const Entry& victim = lru_.back();
    used_ -= victim.bytes;
    index_.erase(victim.object_id);
    lru_.pop_back();
  }
  lru_.push_front(Entry{object_id, bytes});
  index_[object_id] = lru_.begin();
  used_ += bytes;
  return true;
}

bool ObjectCache::erase(const std::string& object_id) {
  auto it = index_.find(object_id);
  if (it == index_.end()) return false;
  used_ -= it->second->bytes;
  lru_.erase(it->second);
  index_.erase(it);
  return true;
}

DataPlane::DataPlane(Simulator& sim, DataPlaneConfig config, const std::vector<FunctionSpec>& functions)
    : sim_(sim), config_(std::move(config)), capacity_bytes_(config_.cache_capacity_mib * 1024 * 1024) {
  for (std::size_t i = 0; i < config_.stores.size(); ++i) {
    for (const auto& o : config_.stores[i].objects) {
      owner_[o] = i;
      sizes_[o] = 1;
    }
  }
  for (const auto& f : functions) {
    for (const auto& ref : f.profile.data_objects) {
      if (!owner_.contains(ref.object_id)) {
        throw ValidationError("data object '" + ref.object_id + "' of function '" + f.name + "' is held by no store");
      }
      sizes_[ref.object_id] = std::max(sizes_[ref.object_id], ref.size_bytes);
    }
  }
}

const ObjectStoreSpec& DataPlane::owner_store(const std::string& object_id) const {
  auto it = owner_.find(object_id);
  if (it == owner_.end()) throw ValidationError("unknown data object '" + object_id + "'");
  return config_.stores[it->second];
}

const ObjectStoreSpec* DataPlane::store_on(const std::string& platform_id) const {
  const ObjectStoreSpec* best = nullptr;
  for (const auto& s : config_.stores) {
    if (s.host != platform_id) continue;
    if (best == nullptr || s.latency_from(platform_id) < best->latency_from(platform_id)) best = &s;
  }
  return best;
}

ObjectCache& DataPlane::cache_for(const std::string& platform_id) {
  auto it = caches_.find(platform_id);
  if (it == caches_.end()) it = caches_.emplace(platform_id, ObjectCache(capacity_bytes_)).first;
  return it->second;
}

const std::string& DataPlane::owner_host(const std::string& object_id) const { return owner_store(object_id).host; }

double DataPlane::local_latency(const std::string& platform_id) const {
  const ObjectStoreSpec* s = store_on(platform_id);
  return s != nullptr ? s->latency_from(platform_id) : config_.default_local_latency_s;
}

double DataPlane::transfer_delay_s(std::int64_t bytes) const {
  return static_cast<double>(bytes) / (config_.bandwidth_mib_s * kMib);
}

double DataPlane::predicted_latency(const std::string& object_id, const std::string& platform_id) const {
  const double remote = owner_store(object_id).latency_from(platform_id);
  auto c = caches_.find(platform_id);
  if (c != caches_.end() && c->second.contains(object_id)) return std::min(remote, local_latency(platform_id));
  return remote;
}

double DataPlane::access(const std::string& function, const std::string& object_id, const std::string& platform_id,
                         AccessKind kind) {
  const ObjectStoreSpec& owner = owner_store(object_id);
  const std::int64_t bytes = sizes_.at(object_id);
  ObjectCache& cache = cache_for(platform_id);
  const double remote = owner.latency_from(platform_id);
  const bool hit = cache.touch(object_id);
  double latency = remote;
  if (hit) {
    latency = std::min(remote, local_latency(platform_id));
  } else {
    if (owner.host != platform_id) ++remote_now_[object_id][platform_id];
    cache.insert(object_id, bytes);
  }
  if (kind == AccessKind::write) {
    for (auto& [pid, other] : caches_) {
      if (pid != platform_id) other.erase(object_id);
    }
    for (auto& [pid, flag] : staged_[object_id]) {
      if (pid != platform_id) flag = false;
    }
    last_writer_[object_id] = function;
  } else if (auto w = last_writer_.find(object_id); w != last_writer_.end() && w->second != function) {
    if (on_interaction) on_interaction(w->second, function);
  }
  bytes_moved_[platform_id] += bytes;
  DataAccess rec{sim_.now_ms(), function, object_id, platform_id, kind, hit, latency};
  if (on_access) on_access(rec);
  log_.push_back(std::move(rec));
  return latency;
}

double DataPlane::access_all(const FunctionSpec& function, const std::string& platform_id) {
  double total = 0.0;
  for (const auto& ref : function.profile.data_objects) {
    for (int i = 0; i < ref.reads_per_invocation; ++i) {
      total += access(function.name, ref.object_id, platform_id, AccessKind::read);
    }
    for (int i = 0; i < ref.writes_per_invocation; ++i) {
      total += access(function.name, ref.object_id, platform_id, AccessKind::write);
    }
  }
  return total;
}

std::optional<std::string> DataPlane::should_migrate(const std::string& object_id) const {
  const ObjectStoreSpec& owner = owner_store(object_id);
  if (migration_in_progress(object_id)) return std::nullopt;
  auto counts = remote_last_.find(object_id);
  if (counts == remote_last_.end()) return std::nullopt;
  std::optional<std::string> best;
  int best_count = 0;
  for (const auto& [pid, n] : counts->second) {
    if (pid == owner.host || n < config_.migration.threshold_accesses) continue;
    const ObjectStoreSpec* target = store_on(pid);
    if (target == nullptr) continue;
    const double gain = owner.latency_from(pid) - target->latency_from(pid);
    if (gain < config_.migration.min_gain_s) continue;
    // std::map iterates ids in lexicographic order, so ties keep the smallest id.
    if (n > best_count) {
      best = pid;
      best_count = n;
    }
  }
  return best;
}

MigrationStart DataPlane::migrate(const std::string& object_id, const std::string& to_platform) {
  const ObjectStoreSpec& owner = owner_store(object_id);
  if (owner.host == to_platform) return MigrationStart::noop;
  if (migration_in_progress(object_id)) return MigrationStart::rejected;
  const ObjectStoreSpec* target = store_on(to_platform);
  if (target == nullptr) throw ValidationError("no object store hosted on '" + to_platform + "'");
  const std::size_t target_index = static_cast<std::size_t>(target - config_.stores.data());
  in_transfer_[object_id] = true;
  const double delay = transfer_delay_s(sizes_.at(object_id));
  sim_.schedule_in(delay, "data.migrate", [this, object_id, target_index] {
    owner_[object_id] = target_index;
    in_transfer_.erase(object_id);
  });
  return MigrationStart::started;
}

double DataPlane::stage_files(const FunctionSpec& function, const std::string& platform_id) {
  std::int64_t total = 0;
  for (const auto& ref : function.profile.data_objects) total += sizes_.at(ref.object_id);
  if (total == 0) return 0.0;
  if (total > capacity_bytes_) {
    throw ValidationError("cannot stage objects of '" + function.name + "' on '" + platform_id +
                          "': cache capacity exceeded");
  }
  ObjectCache& cache = cache_for(platform_id);
  for (const auto& ref : function.profile.data_objects) {
    cache.insert(ref.object_id, sizes_.at(ref.object_id));
    staged_[ref.object_id][platform_id] = true;
  }
  bytes_moved_[platform_id] += total;
  return transfer_delay_s(total);
}

bool DataPlane::is_staged(const std::string& object_id, const std::string& platform_id) const {
  auto o = staged_.find(object_id);
  if (o == staged_.end()) return false;
  auto p = o->second.find(platform_id);
  if (p == o->second.end() || !p->second) return false;
  auto c = caches_.find(platform_id);
  return c != caches_.end() && c->second.contains(object_id);
}

void DataPlane::end_window() {
  remote_last_ = std::move(remote_now_);
  remote_now_.clear();
}

std::vector<std::pair<std::string, std::string>> DataPlane::auto_migrate() {
  std::vector<std::pair<std::string, std::string>> started;
  if (!config_.migration.enabled) return started;
  for (const auto& [object_id, idx] : owner_) {
    if (auto target = should_migrate(object_id)) {
      if (migrate(object_id, *target) == MigrationStart::started) started.emplace_back(object_id, *target);
    }
  }
  return started;
}

std::int64_t DataPlane::bytes_moved(const std::string& platform_id) const {
  auto it = bytes_moved_.find(platform_id);
  return it == bytes_moved_.end() ? 0 : it->second;
}

std::int64_t DataPlane::cache_used_bytes(const std::string& platform_id) const {
  auto it = caches_.find(platform_id);
  return it == caches_.end() ? 0 : it->second.used_bytes();
}

}  // namespace fdn
