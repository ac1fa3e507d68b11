#pragma once

// Seeded random generators shared by the property and acceptance tests.

#include <algorithm>
#include <map>
#include <variant>
#include <random>
#include <string>
#include <vector>

#include "fdn/catalog.hpp"
#include "fdn/model.hpp"
#include "support.hpp"

namespace fdn::fixture {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  int i(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double d(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  // Millisecond-aligned, so durations survive any text form unchanged.
  double ms(int lo_ms, int hi_ms) { return i(lo_ms, hi_ms) / 1000.0; }
  bool coin() { return i(0, 1) == 1; }
  std::string id(const std::string& prefix) { return prefix + std::to_string(i(0, 999)); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(i(0, static_cast<int>(v.size()) - 1))];
  }
};

inline std::vector<std::string> platform_ids(Gen& g, int n) {
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < n) {
    auto id = g.id("p");
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  return out;
}

inline Policy any_policy(Gen& g, const std::vector<std::string>& pids) {
  switch (g.i(0, 5)) {
    case 0: return RankedBest{};
    case 1: return UtilizationAware{g.ms(100, 1000)};
    case 2: return RoundRobinCollab{pids};
    case 3: {
      WeightedCollab w;
      for (const auto& p : pids) w.weights.emplace_back(p, g.i(1, 9));
      return w;
    }
    case 4: return DataLocality{};
    default: return EnergyAware{SloSpec{g.ms(500, 20000)}};
  }
}

inline TargetPlatform any_platform(Gen& g, const std::string& id) {
  TargetPlatform p;
  p.platform_id = id;
  p.kind = static_cast<PlatformKind>(g.i(0, 3));
  p.faas_flavor = g.coin() ? FaasFlavor::warmpool : FaasFlavor::plain;
  p.cold_start_s = g.ms(0, 8000);
  p.scale_to_zero = g.coin();
  p.inactivity_duration_s = g.i(1, 900);
  p.invoker_memory_mib = g.i(256, 16384);
  p.max_concurrent_invocations = g.i(1, 99999);
  const int nodes = g.i(1, 4);
  for (int k = 0; k < nodes; ++k) {
    NodeSpec n = node(id + "-n" + std::to_string(k), g.i(1, 64), g.i(512, 65536));
    if (g.coin()) {
      n.power_domains = {{"cpu0", 10.5, 60.25}, {"cpu1", 11.0, 61.5}};
      n.power_idle_w = 21.5;
      n.power_busy_w = 121.75;
    } else {
      n.power_idle_w = g.ms(1000, 50000);
      n.power_busy_w = n.power_idle_w + g.ms(0, 200000);
    }
    p.nodes.push_back(n);
  }
  return p;
}

/// A small runnable deployment: random platforms, one function that fits
/// every node, a closed-loop workload and optional load and outage injections.
struct RandomRun {
  Catalog catalog;
  ScenarioConfig scenario;
};

inline RandomRun random_run(Gen& g, int k) {
  Catalog c;
  const auto ids = platform_ids(g, g.i(1, 3));
  std::map<std::string, double> base;
  for (const auto& id : ids) {
    TargetPlatform p = any_platform(g, id);
    p.kind = PlatformKind::cloud;
    p.inactivity_duration_s = g.i(1, 30);
    p.invoker_memory_mib = std::max<std::int64_t>(p.invoker_memory_mib, 512);
    c.platforms.push_back(p);
    base[id] = g.ms(1, 3000);
  }
  c.functions.push_back(function("f", base, g.i(0, 100) / 100.0, g.i(64, 512)));  // fits every node
  ScenarioConfig s;
  s.test_name = "prop";
  s.platform_ids = ids;
  s.collection_duration_s = 60.0;
  s.instances = {instance("f", g.i(1, 8), g.i(0, 60), g.ms(0, 2000))};
  s.policy = any_policy(g, ids);
  if (std::holds_alternative<EnergyAware>(s.policy) || std::holds_alternative<DataLocality>(s.policy)) {
    s.policy = RankedBest{};
  }
  s.seed = static_cast<std::uint64_t>(k);
  for (const auto& id : ids) s.benchmark.results[id] = g.i(1, 100);
  if (g.coin()) {
    InjectionEvent e;
    e.kind = InjectionKind::background_load;
    e.platform_id = g.pick(ids);
    e.at_s = g.i(0, 30);
    e.until_s = g.i(30, 60);
    e.cpu_frac = g.i(0, 100) / 100.0;
    e.mem_frac = g.i(0, 100) / 100.0;
    s.injections.push_back(e);
  }
  if (g.coin()) {
    InjectionEvent fail;
    fail.kind = InjectionKind::platform_fail;
    fail.platform_id = g.pick(ids);
    fail.at_s = g.i(0, 40);
    s.injections.push_back(fail);
    if (g.coin()) {
      InjectionEvent recover = fail;
      recover.kind = InjectionKind::platform_recover;
      recover.at_s = g.i(static_cast<int>(fail.at_s), 60);
      s.injections.push_back(recover);
    }
  }
  return RandomRun{std::move(c), std::move(s)};
}

}  // namespace fdn::fixture
