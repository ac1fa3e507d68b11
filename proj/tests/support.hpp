#pragma once

// Builders shared by the unit, property and acceptance tests.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fdn/catalog.hpp"
#include "fdn/model.hpp"

namespace fdn::fixture {

inline NodeSpec node(std::string id, int cores, std::int64_t mem_mib, double idle_w = 10.0, double busy_w = 20.0) {
  NodeSpec n;
  n.node_id = std::move(id);
  n.cores = cores;
  n.memory_mib = mem_mib;
  n.power_idle_w = idle_w;
  n.power_busy_w = busy_w;
  return n;
}

/// Plain-flavor platform with `count` identical nodes named <id>-n<i>.
inline TargetPlatform platform(std::string id, int count, int cores, std::int64_t mem_mib, double cold_start_s = 0.0,
                               FaasFlavor flavor = FaasFlavor::plain) {
  TargetPlatform p;
  p.platform_id = id;
  p.kind = PlatformKind::cloud;
  p.faas_flavor = flavor;
  p.cold_start_s = cold_start_s;
  p.invoker_memory_mib = mem_mib;
  for (int i = 0; i < count; ++i) p.nodes.push_back(node(id + "-n" + std::to_string(i + 1), cores, mem_mib));
  return p;
}

inline FunctionSpec function(std::string name, std::map<std::string, double> base, double cpu = 1.0,
                             std::int64_t mem_mib = 256) {
  FunctionSpec f;
  f.name = std::move(name);
  f.runtime = "python";
  f.profile.base_service_s = std::move(base);
  f.profile.cpu_bound_fraction = cpu;
  f.replica_memory_mib = mem_mib;
  return f;
}

inline TestInstance instance(std::string function, int vus, double duration_s, double sleep_s = 0.0) {
  TestInstance i;
  i.name = function + "-1";
  i.function = std::move(function);
  i.settings.vus = vus;
  i.settings.duration_s = duration_s;
  i.settings.sleep_s = sleep_s;
  return i;
}

inline Catalog bundled_catalog() { return parse_catalog_document(read_text_file(FDN_DEFAULT_CATALOG)); }

inline std::string scenario_path(const std::string& name) {
  return std::string(FDN_SCENARIO_DIR) + "/" + name + ".json";
}

}  // namespace fdn::fixture
