#include "fdn/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "fdn/errors.hpp"
#include "json_util.hpp"

namespace fdn {

using detail::json;

double parse_duration(std::string_view text) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text.empty()) throw ValidationError("duration: empty value");
  std::size_t split = text.size();
  while (split > 0 && std::isalpha(static_cast<unsigned char>(text[split - 1]))) --split;
  std::string number(text.substr(0, split));
  std::string_view unit = text.substr(split);
  double value = 0.0;
  try {
    std::size_t pos = 0;
    value = std::stod(number, &pos);
    if (pos != number.size()) throw ValidationError("");
  } catch (const std::exception&) {
    throw ValidationError("duration: cannot parse '" + std::string(text) + "'");
  }
  double scale = 1.0;
  if (unit.empty() || unit == "s") {
    scale = 1.0;
  } else if (unit == "ms") {
    scale = 0.001;
  } else if (unit == "m") {
    scale = 60.0;
  } else if (unit == "h") {
    scale = 3600.0;
  } else {
    throw ValidationError("duration: unknown unit '" + std::string(unit) + "'");
  }
  if (value < 0.0) throw ValidationError("duration: negative value '" + std::string(text) + "'");
  return value * scale;
}

namespace {

double duration_value(const json& v, std::string_view ctx) {
  if (v.is_number()) {
    double d = v.get<double>();
    if (d < 0.0) throw ValidationError(std::string(ctx) + ": negative duration");
    return d;
  }
  if (v.is_string()) {
    try {
      return parse_duration(v.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(ctx) + ": " + e.what());
    }
  }
  throw ValidationError(std::string(ctx) + ": expected a duration");
}

TestSettings parse_settings(const json& j, const std::string& ctx) {
  TestSettings s;
  s.vus = static_cast<int>(detail::as_int(detail::require(j, "vus", ctx), ctx + ".vus"));
  s.duration_s = duration_value(detail::require(j, "duration", ctx), ctx + ".duration");
  s.sleep_s = detail::get_or(j, "sleep", 0.0, [&](const json& v) { return duration_value(v, ctx + ".sleep"); });
  s.param_file = detail::get_or(j, "param_file", std::string(),
                                [&](const json& v) { return detail::as_string(v, ctx + ".param_file"); });
  return s;
}

TestInstance parse_instance(const std::string& name, const json& j) {
  const std::string ctx = "test instance '" + name + "'";
  TestInstance inst;
  inst.name = name;
  inst.function = detail::as_string(detail::require(j, "application", ctx), ctx + ".application");
  inst.settings = parse_settings(detail::require(j, "test_settings", ctx), ctx + ".test_settings");
  inst.origin_platform = detail::get_or(j, "origin_platform", std::string(), [&](const json& v) {
    return detail::as_string(v, ctx + ".origin_platform");
  });
  return inst;
}

SloSpec parse_slo(const json& j, std::string_view ctx) {
  SloSpec s;
  if (j.is_number() || j.is_string()) {
    s.p90_response_s = duration_value(j, ctx);
  } else {
    s.p90_response_s = duration_value(detail::require(j, "p90_response_s", ctx), std::string(ctx) + ".p90_response_s");
  }
  return s;
}

Policy parse_policy(const json& j) {
  const std::string name = j.is_string() ? j.get<std::string>()
                                         : detail::as_string(detail::require(j, "name", "policy"), "policy.name");
  if (name == "ranked-best") return RankedBest{};
  if (name == "data-locality") return DataLocality{};
  if (name == "utilization-aware") {
    UtilizationAware p;
    if (j.is_object()) {
      p.cpu_cutoff_frac = detail::get_or(j, "cpu_cutoff_frac", 0.9, [](const json& v) {
        return detail::as_double(v, "policy.cpu_cutoff_frac");
      });
    }
    return p;
  }
  if (name == "round-robin-collab") {
    RoundRobinCollab p;
    if (j.is_object()) {
      if (auto it = j.find("platforms"); it != j.end()) {
        for (const auto& v : *it) p.platforms.push_back(detail::as_string(v, "policy.platforms"));
      }
    }
    return p;
  }
  if (name == "weighted-collab") {
    WeightedCollab p;
    if (!j.is_object()) throw ValidationError("policy weighted-collab: missing weights");
    const json& w = detail::require(j, "weights", "policy");
    if (w.is_object()) {
      for (auto it = w.begin(); it != w.end(); ++it) {
        p.weights.emplace_back(it.key(), static_cast<int>(detail::as_int(it.value(), "policy.weights")));
      }
    } else if (w.is_array()) {
      for (const auto& e : w) {
        p.weights.emplace_back(detail::as_string(detail::require(e, "platform", "policy.weights"), "policy.weights"),
                               static_cast<int>(detail::as_int(detail::require(e, "weight", "policy.weights"),
                                                               "policy.weights")));
      }
    } else {
      throw ValidationError("policy weighted-collab: weights must be an object or an array");
    }
    return p;
  }
  if (name == "energy-aware") {
    EnergyAware p;
    if (j.is_object()) {
      if (auto it = j.find("slo"); it != j.end()) p.slo = parse_slo(*it, "policy.slo");
    }
    return p;
  }
  throw ValidationError("unknown policy '" + name + "'");
}

json policy_to_json(const Policy& policy) {
  json j{{"name", policy_name(policy)}};
  if (const auto* u = std::get_if<UtilizationAware>(&policy)) j["cpu_cutoff_frac"] = u->cpu_cutoff_frac;
  if (const auto* r = std::get_if<RoundRobinCollab>(&policy)) j["platforms"] = r->platforms;
  if (const auto* w = std::get_if<WeightedCollab>(&policy)) {
    json arr = json::array();
    for (const auto& [pid, weight] : w->weights) arr.push_back({{"platform", pid}, {"weight", weight}});
    j["weights"] = std::move(arr);
  }
  if (const auto* e = std::get_if<EnergyAware>(&policy)) j["slo"] = {{"p90_response_s", e->slo.p90_response_s}};
  return j;
}

InjectionEvent parse_injection(const json& j) {
  InjectionEvent e;
  const std::string kind = detail::as_string(detail::require(j, "kind", "injection"), "injection.kind");
  if (kind == "platform_fail") {
    e.kind = InjectionKind::platform_fail;
  } else if (kind == "platform_recover") {
    e.kind = InjectionKind::platform_recover;
  } else if (kind == "background_load") {
    e.kind = InjectionKind::background_load;
  } else {
    throw ValidationError("injection: unknown kind '" + kind + "'");
  }
  e.at_s = duration_value(detail::require(j, "at", "injection"), "injection.at");
  e.platform_id = detail::as_string(detail::require(j, "platform", "injection"), "injection.platform");
  if (e.kind == InjectionKind::background_load) {
    e.cpu_frac = detail::get_or(j, "cpu_frac", 0.0, [](const json& v) { return detail::as_double(v, "cpu_frac"); });
    e.mem_frac = detail::get_or(j, "mem_frac", 0.0, [](const json& v) { return detail::as_double(v, "mem_frac"); });
    e.until_s = duration_value(detail::require(j, "until", "injection"), "injection.until");
  }
  return e;
}

const char* injection_kind_name(InjectionKind k) {
  switch (k) {
    case InjectionKind::platform_fail: return "platform_fail";
    case InjectionKind::platform_recover: return "platform_recover";
    case InjectionKind::background_load: return "background_load";
  }
  return "platform_fail";
}

DataPlaneConfig parse_data_plane(const json& j) {
  DataPlaneConfig c;
  const std::string ctx = "data_plane";
  if (auto s = j.find("stores"); s != j.end()) {
    for (const auto& sj : *s) {
      ObjectStoreSpec st;
      st.store_id = detail::as_string(detail::require(sj, "store_id", ctx), ctx + ".store_id");
      st.host = detail::as_string(detail::require(sj, "host", ctx), ctx + ".host");
      if (auto o = sj.find("objects"); o != sj.end()) {
        for (const auto& v : *o) st.objects.push_back(detail::as_string(v, ctx + ".objects"));
      }
      if (auto l = sj.find("access_latency_s"); l != sj.end()) {
        for (auto it = l->begin(); it != l->end(); ++it) {
          st.access_latency_s[it.key()] = detail::as_double(it.value(), ctx + ".access_latency_s");
        }
      }
      st.default_latency_s = detail::get_or(sj, "default_latency_s", 0.5, [&](const json& v) {
        return detail::as_double(v, ctx + ".default_latency_s");
      });
      c.stores.push_back(std::move(st));
    }
  }
  c.cache_capacity_mib = detail::get_or(j, "cache_capacity_mib", std::int64_t{256},
                                        [&](const json& v) { return detail::as_int(v, ctx + ".cache_capacity_mib"); });
  c.bandwidth_mib_s = detail::get_or(j, "bandwidth_mib_s", 10.0,
                                     [&](const json& v) { return detail::as_double(v, ctx + ".bandwidth_mib_s"); });
  c.default_local_latency_s = detail::get_or(j, "default_local_latency_s", 0.005, [&](const json& v) {
    return detail::as_double(v, ctx + ".default_local_latency_s");
  });
  c.staging = detail::get_or(j, "staging", false, [&](const json& v) { return detail::as_bool(v, ctx + ".staging"); });
  if (auto m = j.find("migration"); m != j.end()) {
    c.migration.enabled = detail::get_or(*m, "enabled", false, [&](const json& v) { return detail::as_bool(v, ctx); });
    c.migration.threshold_accesses = static_cast<int>(detail::get_or(
        *m, "threshold_accesses", std::int64_t{10}, [&](const json& v) { return detail::as_int(v, ctx); }));
    c.migration.min_gain_s =
        detail::get_or(*m, "min_gain_s", 0.05, [&](const json& v) { return detail::as_double(v, ctx); });
  }
  return c;
}

json data_plane_to_json(const DataPlaneConfig& c) {
  json stores = json::array();
  for (const auto& s : c.stores) {
    stores.push_back({{"store_id", s.store_id},
                      {"host", s.host},
                      {"objects", s.objects},
                      {"access_latency_s", s.access_latency_s},
                      {"default_latency_s", s.default_latency_s}});
  }
  return {{"stores", std::move(stores)},
          {"cache_capacity_mib", c.cache_capacity_mib},
          {"bandwidth_mib_s", c.bandwidth_mib_s},
          {"default_local_latency_s", c.default_local_latency_s},
          {"staging", c.staging},
          {"migration",
           {{"enabled", c.migration.enabled},
            {"threshold_accesses", c.migration.threshold_accesses},
            {"min_gain_s", c.migration.min_gain_s}}}};
}

void add_platforms(const json& doc, const char* key, std::vector<std::string>& out) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  if (!it->is_array()) throw ValidationError(std::string("scenario.") + key + ": expected an array");
  for (const auto& v : *it) {
    std::string id = detail::as_string(v, key);
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(std::move(id));
  }
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view document) {
  json doc = detail::parse_json(document, "scenario");
  if (!doc.is_object()) throw ValidationError("scenario: expected a JSON object");
  ScenarioConfig s;
  s.test_name = detail::as_string(detail::require(doc, "test_name", "scenario"), "scenario.test_name");
  if (auto it = doc.find("target_platforms_config"); it != doc.end()) {
    s.catalog_path = detail::as_string(*it, "scenario.target_platforms_config");
  } else if (auto c = doc.find("catalog"); c != doc.end()) {
    s.catalog_path = detail::as_string(*c, "scenario.catalog");
  }
  s.functions_path = detail::get_or(doc, "functions_config", std::string(),
                                    [](const json& v) { return detail::as_string(v, "scenario.functions_config"); });
  s.annotations_path = detail::get_or(doc, "annotations", std::string(),
                                      [](const json& v) { return detail::as_string(v, "scenario.annotations"); });
  // "influxdb_url" is accepted and ignored.

  add_platforms(doc, "openwhisk_target_platforms", s.platform_ids);
  add_platforms(doc, "openfaas_target_platforms", s.platform_ids);
  add_platforms(doc, "public_cloud_target_platforms", s.platform_ids);
  add_platforms(doc, "target_platforms", s.platform_ids);

  const json& inst = detail::require(doc, "test_instances", "scenario");
  if (inst.is_object()) {
    for (auto it = inst.begin(); it != inst.end(); ++it) s.instances.push_back(parse_instance(it.key(), it.value()));
  } else if (inst.is_array()) {
    for (const auto& v : inst) {
      s.instances.push_back(parse_instance(detail::as_string(detail::require(v, "name", "test instance"), "name"), v));
    }
  } else {
    throw ValidationError("scenario.test_instances: expected an object or an array");
  }

  if (auto p = doc.find("policy"); p != doc.end()) s.policy = parse_policy(*p);
  s.seed = detail::get_or(doc, "seed", std::uint64_t{0}, [](const json& v) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    return static_cast<std::uint64_t>(detail::as_int(v, "scenario.seed"));
  });
  s.sampling_interval_s = detail::get_or(doc, "sampling_interval", 10.0,
                                         [](const json& v) { return duration_value(v, "scenario.sampling_interval"); });
  s.collection_duration_s = detail::get_or(
      doc, "collection_duration", 1200.0, [](const json& v) { return duration_value(v, "scenario.collection_duration"); });
  if (auto a = doc.find("access_control"); a != doc.end()) {
    s.access_control.secret = detail::get_or(*a, "secret", std::string(),
                                             [](const json& v) { return detail::as_string(v, "access_control"); });
    s.access_control.client_token = detail::get_or(
        *a, "token", std::string(), [](const json& v) { return detail::as_string(v, "access_control"); });
  }
  if (auto b = doc.find("benchmark"); b != doc.end()) {
    s.benchmark.vus = static_cast<int>(
        detail::get_or(*b, "vus", std::int64_t{50}, [](const json& v) { return detail::as_int(v, "benchmark.vus"); }));
    s.benchmark.duration_s =
        detail::get_or(*b, "duration", 60.0, [](const json& v) { return duration_value(v, "benchmark.duration"); });
    if (auto r = b->find("results"); r != b->end()) {
      for (auto it = r->begin(); it != r->end(); ++it) {
        s.benchmark.results[it.key()] = detail::as_double(it.value(), "benchmark.results");
      }
    }
  }
  if (auto d = doc.find("data_plane"); d != doc.end()) s.data_plane = parse_data_plane(*d);
  if (auto inj = doc.find("injections"); inj != doc.end()) {
    if (!inj->is_array()) throw ValidationError("scenario.injections: expected an array");
    for (const auto& e : *inj) s.injections.push_back(parse_injection(e));
  }
  s.prewarm_hints = detail::get_or(doc, "prewarm_hints", false,
                                   [](const json& v) { return detail::as_bool(v, "scenario.prewarm_hints"); });
  if (auto l = doc.find("local_slo"); l != doc.end() && !l->is_null()) s.local_slo = parse_slo(*l, "scenario.local_slo");

  validate_scenario(s);
  return s;
}

std::string serialize_scenario(const ScenarioConfig& s) {
  json instances = json::array();
  for (const auto& i : s.instances) {
    json ij{{"name", i.name},
            {"application", i.function},
            {"test_settings",
             {{"vus", i.settings.vus},
              {"duration", i.settings.duration_s},
              {"sleep", i.settings.sleep_s},
              {"param_file", i.settings.param_file}}}};
    if (!i.origin_platform.empty()) ij["origin_platform"] = i.origin_platform;
    instances.push_back(std::move(ij));
  }
  json injections = json::array();
  for (const auto& e : s.injections) {
    json ej{{"at", e.at_s}, {"kind", injection_kind_name(e.kind)}, {"platform", e.platform_id}};
    if (e.kind == InjectionKind::background_load) {
      ej["cpu_frac"] = e.cpu_frac;
      ej["mem_frac"] = e.mem_frac;
      ej["until"] = e.until_s;
    }
    injections.push_back(std::move(ej));
  }
  json doc{{"test_name", s.test_name},
           {"target_platforms_config", s.catalog_path},
           {"target_platforms", s.platform_ids},
           {"test_instances", std::move(instances)},
           {"policy", policy_to_json(s.policy)},
           {"seed", s.seed},
           {"sampling_interval", s.sampling_interval_s},
           {"collection_duration", s.collection_duration_s},
           {"access_control", {{"secret", s.access_control.secret}, {"token", s.access_control.client_token}}},
           {"benchmark",
            {{"vus", s.benchmark.vus}, {"duration", s.benchmark.duration_s}, {"results", s.benchmark.results}}},
           {"data_plane", data_plane_to_json(s.data_plane)},
           {"injections", std::move(injections)},
           {"prewarm_hints", s.prewarm_hints}};
  if (!s.functions_path.empty()) doc["functions_config"] = s.functions_path;
  if (!s.annotations_path.empty()) doc["annotations"] = s.annotations_path;
  if (s.local_slo) doc["local_slo"] = {{"p90_response_s", s.local_slo->p90_response_s}};
  return doc.dump(2);
}

void validate_injections(const InjectionPlan& plan, double collection_duration_s) {
  std::vector<const InjectionEvent*> ordered;
  for (const auto& e : plan) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const InjectionEvent* a, const InjectionEvent* b) { return a->at_s < b->at_s; });
  std::set<std::string> failed;
  for (const auto* e : ordered) {
    const std::string ctx = "injection at " + std::to_string(e->at_s) + " s on '" + e->platform_id + "'";
    if (e->platform_id.empty()) throw ValidationError(ctx + ": missing platform");
    if (e->at_s < 0.0 || e->at_s > collection_duration_s) {
      throw ValidationError(ctx + ": outside the collection window");
    }
    switch (e->kind) {
      case InjectionKind::platform_fail:
        if (!failed.insert(e->platform_id).second) throw ValidationError(ctx + ": platform already failed");
        break;
      case InjectionKind::platform_recover:
        if (failed.erase(e->platform_id) == 0) throw ValidationError(ctx + ": recover before fail");
        break;
      case InjectionKind::background_load:
        if (e->cpu_frac < 0.0 || e->cpu_frac > 1.0 || e->mem_frac < 0.0 || e->mem_frac > 1.0) {
          throw ValidationError(ctx + ": load fractions must lie in [0,1]");
        }
        if (e->until_s < e->at_s || e->until_s > collection_duration_s) {
          throw ValidationError(ctx + ": load end must lie in [at, collection window]");
        }
        break;
    }
  }
}

void validate_scenario(const ScenarioConfig& s) {
  if (s.test_name.empty()) throw ValidationError("scenario: empty test_name");
  if (s.instances.empty()) throw ValidationError("scenario: test_instances must be non-empty");
  if (s.platform_ids.empty()) throw ValidationError("scenario: no target platforms listed");
  if (!(s.sampling_interval_s > 0.0)) throw ValidationError("scenario: sampling interval must be positive");
  if (!(s.collection_duration_s > 0.0)) throw ValidationError("scenario: collection duration must be positive");
  for (const auto& i : s.instances) {
    const std::string ctx = "test instance '" + i.name + "'";
    if (i.function.empty()) throw ValidationError(ctx + ": empty application");
    if (i.settings.vus < 1) throw ValidationError(ctx + ": vus must be >= 1");
    if (i.settings.sleep_s < 0.0) throw ValidationError(ctx + ": sleep must be non-negative");
    if (i.settings.duration_s > s.collection_duration_s) {
      throw ValidationError(ctx + ": duration exceeds the collection window");
    }
  }
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UtilizationAware>) {
          if (!(p.cpu_cutoff_frac > 0.0) || p.cpu_cutoff_frac > 1.0) {
            throw ValidationError("policy utilization-aware: cpu_cutoff_frac must lie in (0,1]");
          }
        } else if constexpr (std::is_same_v<T, RoundRobinCollab>) {
          if (p.platforms.empty()) throw ValidationError("policy round-robin-collab: platform list is empty");
        } else if constexpr (std::is_same_v<T, WeightedCollab>) {
          if (p.weights.empty()) throw ValidationError("policy weighted-collab: no weights");
          for (const auto& [pid, w] : p.weights) {
            if (w < 1) throw ValidationError("policy weighted-collab: weight of '" + pid + "' must be >= 1");
          }
        } else if constexpr (std::is_same_v<T, EnergyAware>) {
          if (!(p.slo.p90_response_s > 0.0)) throw ValidationError("policy energy-aware: slo must be positive");
        }
      },
      s.policy);
  if (s.benchmark.vus < 1 || !(s.benchmark.duration_s > 0.0)) {
    throw ValidationError("scenario.benchmark: vus and duration must be positive");
  }
  const auto& dp = s.data_plane;
  if (dp.cache_capacity_mib < 0) throw ValidationError("data_plane: negative cache capacity");
  if (!(dp.bandwidth_mib_s > 0.0)) throw ValidationError("data_plane: bandwidth must be positive");
  if (dp.migration.threshold_accesses < 1) throw ValidationError("data_plane: migration threshold must be >= 1");
  if (dp.migration.min_gain_s < 0.0) throw ValidationError("data_plane: negative migration gain");
  std::set<std::string> store_ids, objects;
  for (const auto& st : dp.stores) {
    if (!store_ids.insert(st.store_id).second) throw ValidationError("data_plane: duplicate store '" + st.store_id + "'");
    for (const auto& o : st.objects) {
      if (!objects.insert(o).second) throw ValidationError("data_plane: object '" + o + "' held by two stores");
    }
    for (const auto& [pid, l] : st.access_latency_s) {
      if (!(l > 0.0)) throw ValidationError("data_plane: store '" + st.store_id + "' has non-positive latency");
    }
    if (st.host != "remote") {
      const double home = st.latency_from(st.host);
      bool dominated = home <= st.default_latency_s;
      for (const auto& [pid, l] : st.access_latency_s) dominated = dominated && home <= l;
      if (!dominated) {
        throw ValidationError("data_plane: store '" + st.store_id + "' is slower from its host than from elsewhere");
      }
    }
  }
  if (s.local_slo && !(s.local_slo->p90_response_s > 0.0)) throw ValidationError("scenario: local_slo must be positive");
  validate_injections(s.injections, s.collection_duration_s);
}

}  // namespace fdn
