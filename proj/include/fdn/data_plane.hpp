#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fdn/model.hpp"
#include "fdn/sim_kernel.hpp"

namespace fdn {

enum class AccessKind { read, write };

struct DataAccess {
  SimTime t = 0;
  std::string function;
  std::string object_id;
  std::string platform_id;
  AccessKind kind = AccessKind::read;
  bool hit = false;
  double latency_s = 0.0;
};

enum class MigrationStart { started, noop, rejected };

/// Per-platform LRU cache of whole objects, bounded in bytes.
class ObjectCache {
 public:
  explicit ObjectCache(std::int64_t capacity_bytes = 0) : capacity_(capacity_bytes) {}

  bool contains(const std::string& object_id) const { return index_.contains(object_id); }
  /// Marks the entry most recently used. Returns false on a miss.
  bool touch(const std::string& object_id);
  /// Inserts (or refreshes) an entry, evicting least-recently-used entries to fit.
  /// Objects larger than the whole cache are not cached.
  bool insert(const std::string& object_id, std::int64_t bytes);
  bool erase(const std::string& object_id);

  std::int64_t used_bytes() const { return used_; }
  std::int64_t capacity_bytes() const { return capacity_; }
  std::size_t size() const { return index_.size(); }

 private:
  struct Entry {
    std::string object_id;
    std::int64_t bytes;
  };
  std::int64_t capacity_;
  std::int64_t used_ = 0;
  std::list<Entry> lru_;  // front = most recent
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

/// Object stores, caching, migration and staging between platforms.
///
/// Every data access of an invocation goes through access(): a cache hit costs
/// the platform's local latency, a miss costs the owning store's latency from
/// the accessing platform and populates that platform's cache. Writes
/// invalidate every other platform's copy.
class DataPlane {
 public:
  DataPlane(Simulator& sim, DataPlaneConfig config, const std::vector<FunctionSpec>& functions);

  /// Throws ValidationError for an object held by no store.
  double access(const std::string& function, const std::string& object_id, const std::string& platform_id,
                AccessKind kind);

  /// Total access latency of one invocation of `function` on `platform_id`.
  double access_all(const FunctionSpec& function, const std::string& platform_id);

  /// Latency the next access would see, without side effects.
  double predicted_latency(const std::string& object_id, const std::string& platform_id) const;

  std::optional<std::string> should_migrate(const std::string& object_id) const;
  MigrationStart migrate(const std::string& object_id, const std::string& to_platform);
  /// Pre-copies the function's objects into the platform cache; returns the staging delay.
  double stage_files(const FunctionSpec& function, const std::string& platform_id);

  /// Closes the current access-count window (used by should_migrate).
  void end_window();
  /// Runs should_migrate/migrate for every object when migration is enabled.
  std::vector<std::pair<std::string, std::string>> auto_migrate();

  double local_latency(const std::string& platform_id) const;
  const std::string& owner_host(const std::string& object_id) const;
  bool migration_in_progress(const std::string& object_id) const { return in_transfer_.contains(object_id); }
  bool is_staged(const std::string& object_id, const std::string& platform_id) const;
  double transfer_delay_s(std::int64_t bytes) const;

  std::int64_t bytes_moved(const std::string& platform_id) const;
  std::int64_t cache_used_bytes(const std::string& platform_id) const;
  std::int64_t cache_capacity_bytes() const { return capacity_bytes_; }
  bool knows_object(const std::string& object_id) const { return owner_.contains(object_id); }
  const std::vector<DataAccess>& log() const { return log_; }
  const DataPlaneConfig& config() const { return config_; }

  std::function<void(const DataAccess&)> on_access;
  std::function<void(const std::string& producer, const std::string& consumer)> on_interaction;

 private:
  const ObjectStoreSpec& owner_store(const std::string& object_id) const;
  const ObjectStoreSpec* store_on(const std::string& platform_id) const;
  ObjectCache& cache_for(const std::string& platform_id);

  Simulator& sim_;
  DataPlaneConfig config_;
  std::int64_t capacity_bytes_;
  std::map<std::string, std::int64_t> sizes_;
  std::map<std::string, std::size_t> owner_;  // object -> index into config_.stores
  std::map<std::string, ObjectCache> caches_;
  std::map<std::string, std::map<std::string, bool>> staged_;
  std::map<std::string, std::map<std::string, int>> remote_now_;   // object -> platform -> count
  std::map<std::string, std::map<std::string, int>> remote_last_;
  std::map<std::string, std::int64_t> bytes_moved_;
  std::map<std::string, std::string> last_writer_;
  std::map<std::string, bool> in_transfer_;
  std::vector<DataAccess> log_;
};

}  // namespace fdn
