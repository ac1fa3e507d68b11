#include "fdn/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "fdn/errors.hpp"
#include "json_util.hpp"

#ifndef FDN_DEFAULT_CATALOG
#define FDN_DEFAULT_CATALOG "data/catalog.json"
#endif

namespace fdn {

using detail::json;

namespace {

constexpr int kSyntheticCores = 1024;
constexpr std::int64_t kSyntheticMemoryMib = 1048576;

PlatformKind parse_kind(const std::string& s, std::string_view ctx) {
  if (s == "edge") return PlatformKind::edge;
  if (s == "cloud") return PlatformKind::cloud;
  if (s == "hpc") return PlatformKind::hpc;
  if (s == "public") return PlatformKind::public_cloud;
  throw ValidationError(std::string(ctx) + ": unknown platform kind '" + s + "'");
}

const char* kind_name(PlatformKind k) {
  switch (k) {
    case PlatformKind::edge: return "edge";
    case PlatformKind::cloud: return "cloud";
    case PlatformKind::hpc: return "hpc";
    case PlatformKind::public_cloud: return "public";
  }
  return "cloud";
}

FaasFlavor parse_flavor(const std::string& s, std::string_view ctx) {
  if (s == "warmpool") return FaasFlavor::warmpool;
  if (s == "plain") return FaasFlavor::plain;
  throw ValidationError(std::string(ctx) + ": unknown faas_flavor '" + s + "'");
}

NodeSpec parse_node(const json& j, bool power_required, const std::string& ctx) {
  NodeSpec n;
  n.node_id = detail::as_string(detail::require(j, "node_id", ctx), ctx + ".node_id");
  std::string nctx = ctx + "[" + n.node_id + "]";
  n.cores = static_cast<int>(detail::as_int(detail::require(j, "cores", nctx), nctx + ".cores"));
  n.memory_mib = detail::as_int(detail::require(j, "memory_mib", nctx), nctx + ".memory_mib");
  if (auto it = j.find("power_domains"); it != j.end()) {
    if (!it->is_array()) throw ValidationError(nctx + ".power_domains: expected an array");
    double idle = 0.0, busy = 0.0;
    for (const auto& d : *it) {
      PowerDomain pd;
      pd.name = detail::as_string(detail::require(d, "name", nctx), nctx + ".power_domains.name");
      pd.idle_w = detail::as_double(detail::require(d, "idle_w", nctx), nctx + ".idle_w");
      pd.busy_w = detail::as_double(detail::require(d, "busy_w", nctx), nctx + ".busy_w");
      if (pd.busy_w < pd.idle_w) {
        throw ValidationError(nctx + ": power domain '" + pd.name + "' busy power below idle power");
      }
      idle += pd.idle_w;
      busy += pd.busy_w;
      n.power_domains.push_back(std::move(pd));
    }
    n.power_idle_w = idle;
    n.power_busy_w = busy;
  } else if (j.contains("power_idle_w") || j.contains("power_busy_w") || power_required) {
    n.power_idle_w = detail::as_double(detail::require(j, "power_idle_w", nctx), nctx + ".power_idle_w");
    n.power_busy_w = detail::as_double(detail::require(j, "power_busy_w", nctx), nctx + ".power_busy_w");
  }
  return n;
}

TargetPlatform parse_platform(const json& j) {
  TargetPlatform p;
  p.platform_id = detail::as_string(detail::require(j, "platform_id", "platform"), "platform.platform_id");
  const std::string ctx = "platform '" + p.platform_id + "'";
  p.kind = parse_kind(detail::as_string(detail::require(j, "kind", ctx), ctx + ".kind"), ctx);
  p.faas_flavor = parse_flavor(
      detail::get_or(j, "faas_flavor", std::string("warmpool"),
                     [&](const json& v) { return detail::as_string(v, ctx + ".faas_flavor"); }),
      ctx);
  const double default_cold = p.faas_flavor == FaasFlavor::warmpool ? 5.0 : 1.0;
  auto dbl = [&](const char* key, double fallback) {
    return detail::get_or(j, key, fallback,
                          [&](const json& v) { return detail::as_double(v, ctx + "." + key); });
  };
  auto i64 = [&](const char* key, std::int64_t fallback) {
    return detail::get_or(j, key, fallback,
                          [&](const json& v) { return detail::as_int(v, ctx + "." + key); });
  };
  p.cold_start_s = dbl("cold_start_s", default_cold);
  p.scale_to_zero = detail::get_or(j, "scale_to_zero", true,
                                   [&](const json& v) { return detail::as_bool(v, ctx); });
  p.inactivity_duration_s = dbl("inactivity_duration_s", 600.0);
  p.invoker_memory_mib = i64("invoker_memory_mib", 4096);
  p.max_concurrent_invocations = i64("max_concurrent_invocations", 99999);

  const bool is_public = p.kind == PlatformKind::public_cloud;
  auto nodes = j.find("nodes");
  if (nodes != j.end() && !nodes->is_null()) {
    if (!nodes->is_array()) throw ValidationError(ctx + ".nodes: expected an array");
    for (const auto& nj : *nodes) p.nodes.push_back(parse_node(nj, !is_public, ctx + ".nodes"));
  } else if (is_public) {
    // Host configuration of public FaaS offerings is not visible to users;
    // model it as one large synthetic node.
    NodeSpec n;
    n.node_id = p.platform_id + "-synthetic";
    n.cores = kSyntheticCores;
    n.memory_mib = kSyntheticMemoryMib;
    if (auto s = j.find("synthetic_node"); s != j.end()) {
      n.cores = static_cast<int>(detail::get_or(*s, "cores", std::int64_t{kSyntheticCores},
                                                [&](const json& v) { return detail::as_int(v, ctx); }));
      n.memory_mib = detail::get_or(*s, "memory_mib", kSyntheticMemoryMib,
                                    [&](const json& v) { return detail::as_int(v, ctx); });
    }
    p.nodes.push_back(std::move(n));
  }
  validate_platform(p);
  return p;
}

WorkloadProfile parse_profile(const json& j, const std::string& ctx) {
  WorkloadProfile w;
  const json& base = detail::require(j, "base_service_s", ctx);
  if (!base.is_object()) throw ValidationError(ctx + ".base_service_s: expected an object");
  for (auto it = base.begin(); it != base.end(); ++it) {
    w.base_service_s[it.key()] = detail::as_double(it.value(), ctx + ".base_service_s." + it.key());
  }
  w.cpu_bound_fraction = detail::get_or(j, "cpu_bound_fraction", 1.0, [&](const json& v) {
    return detail::as_double(v, ctx + ".cpu_bound_fraction");
  });
  w.jitter_frac = detail::get_or(j, "jitter_frac", 0.0,
                                 [&](const json& v) { return detail::as_double(v, ctx + ".jitter_frac"); });
  w.payload_bytes = detail::get_or(j, "payload_bytes", std::int64_t{0},
                                   [&](const json& v) { return detail::as_int(v, ctx + ".payload_bytes"); });
  if (auto d = j.find("data_objects"); d != j.end()) {
    for (const auto& oj : *d) {
      DataObjectRef o;
      o.object_id = detail::as_string(detail::require(oj, "object_id", ctx), ctx + ".object_id");
      o.size_bytes = detail::as_int(detail::require(oj, "size_bytes", ctx), ctx + ".size_bytes");
      o.reads_per_invocation = static_cast<int>(detail::get_or(
          oj, "reads_per_invocation", std::int64_t{0}, [&](const json& v) { return detail::as_int(v, ctx); }));
      o.writes_per_invocation = static_cast<int>(detail::get_or(
          oj, "writes_per_invocation", std::int64_t{0}, [&](const json& v) { return detail::as_int(v, ctx); }));
      w.data_objects.push_back(std::move(o));
    }
  }
  return w;
}

json node_to_json(const NodeSpec& n) {
  json j{{"node_id", n.node_id}, {"cores", n.cores}, {"memory_mib", n.memory_mib}};
  if (!n.power_domains.empty()) {
    json arr = json::array();
    for (const auto& d : n.power_domains) {
      arr.push_back({{"name", d.name}, {"idle_w", d.idle_w}, {"busy_w", d.busy_w}});
    }
    j["power_domains"] = std::move(arr);
  } else {
    j["power_idle_w"] = n.power_idle_w;
    j["power_busy_w"] = n.power_busy_w;
  }
  return j;
}

}  // namespace

std::int64_t TargetPlatform::max_node_memory_mib() const {
  std::int64_t m = 0;
  for (const auto& n : nodes) m = std::max(m, n.memory_mib);
  return m;
}

const TargetPlatform* Catalog::find_platform(std::string_view id) const {
  for (const auto& p : platforms) {
    if (p.platform_id == id) return &p;
  }
  return nullptr;
}

const FunctionSpec* Catalog::find_function(std::string_view name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

void validate_platform(const TargetPlatform& p) {
  const std::string ctx = "platform '" + p.platform_id + "'";
  if (p.platform_id.empty()) throw ValidationError("platform: empty platform_id");
  if (p.nodes.empty()) throw ValidationError(ctx + ": nodes must be non-empty");
  if (p.cold_start_s < 0.0) throw ValidationError(ctx + ": cold_start_s must be non-negative");
  if (!(p.inactivity_duration_s > 0.0)) throw ValidationError(ctx + ": inactivity_duration_s must be positive");
  if (p.invoker_memory_mib < 1) throw ValidationError(ctx + ": invoker_memory_mib must be positive");
  if (p.max_concurrent_invocations < 1) {
    throw ValidationError(ctx + ": max_concurrent_invocations must be positive");
  }
  std::set<std::string> ids;
  for (const auto& n : p.nodes) {
    if (n.node_id.empty()) throw ValidationError(ctx + ": empty node_id");
    if (!ids.insert(n.node_id).second) throw ValidationError(ctx + ": duplicate node_id '" + n.node_id + "'");
    if (n.cores < 1) throw ValidationError(ctx + ": node '" + n.node_id + "' has zero cores");
    if (n.memory_mib < 1) throw ValidationError(ctx + ": node '" + n.node_id + "' has zero memory");
    if (n.power_idle_w < 0.0) throw ValidationError(ctx + ": node '" + n.node_id + "' has negative idle power");
    if (n.power_busy_w < n.power_idle_w) {
      throw ValidationError(ctx + ": node '" + n.node_id + "' has power_busy_w < power_idle_w");
    }
  }
}

void validate_function(const FunctionSpec& f) {
  const std::string ctx = "function '" + f.name + "'";
  if (f.name.empty()) throw ValidationError("function: empty name");
  if (f.replica_memory_mib < 1) throw ValidationError(ctx + ": replica_memory_mib must be positive");
  const auto& w = f.profile;
  if (w.cpu_bound_fraction < 0.0 || w.cpu_bound_fraction > 1.0) {
    throw ValidationError(ctx + ": cpu_bound_fraction must lie in [0,1]");
  }
  if (w.jitter_frac < 0.0) throw ValidationError(ctx + ": jitter_frac must be non-negative");
  if (w.payload_bytes < 0) throw ValidationError(ctx + ": payload_bytes must be non-negative");
  for (const auto& [pid, s] : w.base_service_s) {
    if (!(s > 0.0)) throw ValidationError(ctx + ": base_service_s for '" + pid + "' must be positive");
  }
  for (const auto& o : w.data_objects) {
    if (o.object_id.empty()) throw ValidationError(ctx + ": data object with empty id");
    if (o.size_bytes < 1) throw ValidationError(ctx + ": data object '" + o.object_id + "' must have positive size");
    if (o.reads_per_invocation < 0 || o.writes_per_invocation < 0) {
      throw ValidationError(ctx + ": negative access count on '" + o.object_id + "'");
    }
  }
}

std::vector<TargetPlatform> parse_catalog(std::string_view document) {
  json doc = detail::parse_json(document, "catalog");
  if (!doc.is_object()) throw ValidationError("catalog: expected a JSON object");
  const json& arr = detail::require(doc, "platforms", "catalog");
  if (!arr.is_array()) throw ValidationError("catalog: 'platforms' must be an array");
  if (arr.empty()) throw ValidationError("catalog must contain >=1 platform");
  std::vector<TargetPlatform> out;
  std::set<std::string> ids, node_ids;
  for (const auto& pj : arr) {
    TargetPlatform p = parse_platform(pj);
    if (!ids.insert(p.platform_id).second) {
      throw ValidationError("catalog: duplicate platform_id '" + p.platform_id + "'");
    }
    for (const auto& n : p.nodes) {
      if (!node_ids.insert(n.node_id).second) {
        throw ValidationError("catalog: node_id '" + n.node_id + "' used by more than one platform");
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<FunctionSpec> parse_functions(std::string_view document) {
  json doc = detail::parse_json(document, "functions");
  std::vector<FunctionSpec> out;
  auto arr = doc.find("functions");
  if (arr == doc.end()) return out;
  if (!arr->is_array()) throw ValidationError("functions: expected an array");
  std::set<std::string> names;
  for (const auto& fj : *arr) {
    FunctionSpec f;
    f.name = detail::as_string(detail::require(fj, "name", "function"), "function.name");
    const std::string ctx = "function '" + f.name + "'";
    f.runtime = detail::get_or(fj, "runtime", std::string("default"),
                               [&](const json& v) { return detail::as_string(v, ctx + ".runtime"); });
    f.replica_memory_mib = detail::get_or(fj, "replica_memory_mib", std::int64_t{256}, [&](const json& v) {
      return detail::as_int(v, ctx + ".replica_memory_mib");
    });
    f.profile = parse_profile(detail::require(fj, "profile", ctx), ctx + ".profile");
    validate_function(f);
    if (!names.insert(f.name).second) throw ValidationError("functions: duplicate name '" + f.name + "'");
    out.push_back(std::move(f));
  }
  return out;
}

Catalog parse_catalog_document(std::string_view document) {
  return Catalog{parse_catalog(document), parse_functions(document)};
}

std::string serialize_catalog(const Catalog& catalog) {
  json platforms = json::array();
  for (const auto& p : catalog.platforms) {
    json nodes = json::array();
    for (const auto& n : p.nodes) nodes.push_back(node_to_json(n));
    platforms.push_back({{"platform_id", p.platform_id},
                         {"kind", kind_name(p.kind)},
                         {"faas_flavor", p.faas_flavor == FaasFlavor::warmpool ? "warmpool" : "plain"},
                         {"cold_start_s", p.cold_start_s},
                         {"scale_to_zero", p.scale_to_zero},
                         {"inactivity_duration_s", p.inactivity_duration_s},
                         {"invoker_memory_mib", p.invoker_memory_mib},
                         {"max_concurrent_invocations", p.max_concurrent_invocations},
                         {"nodes", std::move(nodes)}});
  }
  json functions = json::array();
  for (const auto& f : catalog.functions) {
    json objects = json::array();
    for (const auto& o : f.profile.data_objects) {
      objects.push_back({{"object_id", o.object_id},
                         {"size_bytes", o.size_bytes},
                         {"reads_per_invocation", o.reads_per_invocation},
                         {"writes_per_invocation", o.writes_per_invocation}});
    }
    functions.push_back({{"name", f.name},
                         {"runtime", f.runtime},
                         {"replica_memory_mib", f.replica_memory_mib},
                         {"profile",
                          {{"base_service_s", f.profile.base_service_s},
                           {"cpu_bound_fraction", f.profile.cpu_bound_fraction},
                           {"jitter_frac", f.profile.jitter_frac},
                           {"payload_bytes", f.profile.payload_bytes},
                           {"data_objects", std::move(objects)}}}});
  }
  return json{{"platforms", std::move(platforms)}, {"functions", std::move(functions)}}.dump(2);
}

void validate_deployment(const FunctionSpec& f, const TargetPlatform& p) {
  if (!f.profile.base_service_s.contains(p.platform_id)) {
    throw ValidationError("function '" + f.name + "' has no base_service_s for platform '" + p.platform_id + "'");
  }
  if (f.replica_memory_mib > p.max_node_memory_mib() || f.replica_memory_mib > p.invoker_memory_mib) {
    throw ValidationError("function '" + f.name + "' replica footprint " + std::to_string(f.replica_memory_mib) +
                          " MiB exceeds every node of platform '" + p.platform_id + "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string default_catalog_path() {
  if (const char* env = std::getenv("FDN_CATALOG"); env != nullptr && *env != '\0') return env;
  return FDN_DEFAULT_CATALOG;
}

}  // namespace fdn
