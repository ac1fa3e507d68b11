#include "fdn/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "fdn/behavior.hpp"
#include "fdn/errors.hpp"
#include "fdn/fault_inject.hpp"
#include "fdn/loadgen.hpp"
#include "fdn/scenario.hpp"
#include "fdn/sim_kernel.hpp"
#include "json_util.hpp"
#include "text_util.hpp"

namespace fdn {

using detail::json;
using detail::num;

std::vector<MetricWindow> RunResult::series(const std::string& name) const {
  std::vector<MetricWindow> out;
  for (const auto& w : windows) {
    if (w.series == name) out.push_back(w);
  }
  return out;
}

const SeriesSummary& RunResult::summary_for(const std::string& name) const {
  for (const auto& s : summary) {
    if (s.series == name) return s;
  }
  throw std::out_of_range("no summary for series '" + name + "'");
}

std::string make_run_id(const std::string& test_name, std::uint64_t seed) {
  std::string id;
  for (char c : test_name) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    id += keep ? c : '_';
  }
  if (id.empty()) id = "run";
  return id + "-s" + std::to_string(seed);
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

struct Deployment {
  std::vector<TargetPlatform> platforms;
  std::map<std::string, std::vector<FunctionSpec>> functions;  // platform -> deployed functions
  std::vector<FunctionSpec> all_functions;
};

Deployment resolve_deployment(const ScenarioConfig& s, const Catalog& catalog) {
  Deployment d;
  for (const auto& pid : s.platform_ids) {
    const TargetPlatform* p = catalog.find_platform(pid);
    if (p == nullptr) throw ValidationError("scenario names unknown platform '" + pid + "'");
    if (std::any_of(d.platforms.begin(), d.platforms.end(), [&](const auto& x) { return x.platform_id == pid; })) {
      continue;
    }
    d.platforms.push_back(*p);
  }
  for (const auto& name : s.function_names()) {
    const FunctionSpec* f = catalog.find_function(name);
    if (f == nullptr) throw ValidationError("scenario names unknown function '" + name + "'");
    d.all_functions.push_back(*f);
    bool placed = false;
    for (const auto& p : d.platforms) {
      if (!f->profile.base_service_s.contains(p.platform_id)) continue;
      validate_deployment(*f, p);
      d.functions[p.platform_id].push_back(*f);
      placed = true;
    }
    if (!placed) throw ValidationError("function '" + name + "' cannot be deployed on any listed platform");
  }
  for (const auto& inst : s.instances) {
    if (inst.origin_platform.empty()) continue;
    if (!d.functions.contains(inst.origin_platform)) {
      throw ValidationError("origin platform '" + inst.origin_platform + "' is not part of the run");
    }
  }
  return d;
}

class Engine {
 public:
  Engine(const ScenarioConfig& s, const Catalog& catalog, const RunOptions& options)
      : s_(s), options_(options), deployment_(resolve_deployment(s, catalog)) {
    result_.run_id = make_run_id(s.test_name, s.seed);
    result_.policy = policy_name(s.policy);
    result_.seed = s.seed;
    result_.sampling_interval_s = s.sampling_interval_s;
    result_.collection_duration_s = s.collection_duration_s;
    for (const auto& p : deployment_.platforms) result_.platforms.push_back(p.platform_id);
    result_.benchmark = benchmark_platforms(s, catalog);
    std::vector<std::string> deployed;
    for (const auto& p : deployment_.platforms) {
      if (deployment_.functions.contains(p.platform_id)) deployed.push_back(p.platform_id);
      if (!result_.benchmark.contains(p.platform_id)) {
        if (!s.benchmark.results.empty()) {
          throw ValidationError("no benchmark result for platform '" + p.platform_id + "'");
        }
        result_.benchmark[p.platform_id] = 0.0;
      }
    }
    result_.rank = rank_platforms(result_.benchmark, deployed);
  }

  RunResult run() {
    if (!options_.out_dir.empty()) {
      std::filesystem::create_directories(options_.out_dir);
      kb_ = std::make_unique<KnowledgeStore>(std::filesystem::path(options_.out_dir) / "knowledge");
      if (options_.trace) {
        trace_.open(std::filesystem::path(options_.out_dir) / "trace.tsv", std::ios::trunc);
        trace_ << "time_ms\tsequence\tkind\n";
        sim_.set_trace(&trace_);
      }
    } else {
      kb_ = std::make_unique<KnowledgeStore>();
    }
    kb_->open(result_.run_id);
    for (const auto& [pid, score] : result_.benchmark) {
      kb_->append(KnowledgeKind::benchmark_result, 0, json{{"platform", pid}, {"throughput_rps", score}}.dump());
    }

    monitor_.emplace(s_.sampling_interval_s, s_.collection_duration_s, result_.platforms);
    setup_data_plane();
    setup_platforms();
    setup_scheduler();
    apply_annotations();
    if (data_plane_ && s_.data_plane.staging) {
      for (auto& p : platforms_) {
        for (const auto& f : deployment_.functions.at(p->id())) data_plane_->stage_files(f, p->id());
      }
    }
    apply_plan(sim_, s_.injections, s_.collection_duration_s,
               FaultTargets{[this](const std::string& pid) { fail_platform(pid); },
                            [this](const std::string& pid) { recover_platform(pid); },
                            [this](const std::string& pid, double cpu, double mem, double from, double to) {
                              if (PlatformSim* p = find(pid)) p->apply_background_load(cpu, mem, from, to);
                            }});

    loadgen_ = std::make_unique<LoadGenerator>(
        sim_, s_.instances,
        [this](std::size_t vu, const std::string& request_id, const std::string& function) {
          issue(vu, request_id, function);
        });
    loadgen_->start();
    schedule_tick(1);
    sim_.run_until(s_.collection_duration_s);
    finish();
    return std::move(result_);
  }

 private:
  PlatformSim* find(const std::string& pid) {
    for (auto& p : platforms_) {
      if (p->id() == pid) return p.get();
    }
    return nullptr;
  }

  void setup_data_plane() {
    if (s_.data_plane.stores.empty()) return;
    data_plane_ = std::make_unique<DataPlane>(sim_, s_.data_plane, deployment_.all_functions);
    data_plane_->on_access = [this](const DataAccess& a) {
      models_.data.record(a.function, a.object_id, a.platform_id, a.kind == AccessKind::write);
    };
    data_plane_->on_interaction = [this](const std::string& producer, const std::string& consumer) {
      if (models_.interactions.record(producer, consumer)) {
        kb_->append(KnowledgeKind::model_snapshot, current_window(),
                    json{{"type", "colocation"},
                         {"producer", producer},
                         {"consumer", consumer},
                         {"weight", models_.interactions.weight(producer, consumer)}}
                        .dump());
      }
    };
  }

  void setup_platforms() {
    for (const auto& spec : deployment_.platforms) {
      auto fit = deployment_.functions.find(spec.platform_id);
      std::vector<FunctionSpec> fns = fit == deployment_.functions.end() ? std::vector<FunctionSpec>{} : fit->second;
      PlatformSim::Hooks hooks;
      hooks.on_complete = [this](const InvocationRecord& rec) { on_record(rec); };
      hooks.on_abort = [this](const Request& req) { on_abort(req); };
      auto p = std::make_unique<PlatformSim>(sim_, spec, fns, data_plane_.get(), s_.seed, hooks);
      p->deploy();
      for (const auto& f : fns) {
        const double base = f.profile.base_service_s.at(spec.platform_id);
        models_.perf.set_prior(f.name, spec.platform_id, base, p->attributed_energy_j(f.name, base));
      }
      platforms_.push_back(std::move(p));
    }
  }

  Prediction predict(const std::string& fn, const std::string& pid) {
    PlatformSim& p = *find(pid);
    Prediction out;
    const double exec = models_.perf.exec_s(fn, pid).value_or(0.0);
    const auto rates = models_.events.rates(fn, pid);
    const double rate = rates.empty() ? 0.0 : rates.back();
    out.p90_s = predict_p90(exec, rate, p.serving_capacity(fn), p.live_replicas(fn) > 0, p.spec().cold_start_s);
    out.energy_j = models_.perf.energy_j(fn, pid);
    return out;
  }

  void setup_scheduler() {
    std::vector<PlatformSim*> raw;
    for (auto& p : platforms_) raw.push_back(p.get());
    Policy policy = s_.policy;
    if (auto* rr = std::get_if<RoundRobinCollab>(&policy); rr != nullptr && rr->platforms.empty()) {
      rr->platforms = result_.platforms;
    }
    scheduler_ = std::make_unique<Scheduler>(policy, raw, result_.rank, data_plane_.get(),
                                             [this](const std::string& fn, const std::string& pid) {
                                               return predict(fn, pid);
                                             });
    scheduler_->on_decision = [this](const SchedulingDecision& d) { log_decision(d); };
    for (auto& p : platforms_) sidecars_.emplace(p->id(), Sidecar(*p, s_.local_slo));
  }

  void apply_annotations() {
    const std::string path = !options_.annotations_path.empty() ? options_.annotations_path : s_.annotations_path;
    if (path.empty()) return;
    const AnnotatedDeployment a = parse_annotated(read_text_file(path));
    for (const auto& [fn, ann] : a.annotations) {
      PlatformSim* p = find(ann.preferred_platform);
      if (p == nullptr || !p->deployed(fn) || ann.prewarm_count <= 0) continue;
      const int made = p->prewarm_function(fn, ann.prewarm_count);
      if (made < ann.prewarm_count) {
        result_.warnings.push_back("annotation prewarm for '" + fn + "' limited to " + std::to_string(made) +
                                   " replicas by memory");
      }
    }
  }

  int current_window() const {
    const int w = monitor_->window_of(sim_.now());
    return w < 0 ? monitor_->window_count() - 1 : w;
  }

  void log_decision(const SchedulingDecision& d) {
    result_.decisions.push_back(d);
    kb_->append(KnowledgeKind::decision, current_window(),
                json{{"t_ms", to_ms(d.decided_at_s)},
                     {"request_id", d.request_id},
                     {"policy", d.policy},
                     {"platform", d.platform_id},
                     {"node", d.node_id},
                     {"rationale", d.rationale},
                     {"degraded", d.degraded}}
                    .dump());
  }

  void issue(std::size_t vu, const std::string& request_id, const std::string& function) {
    ++result_.totals.issued;
    vu_by_request_[request_id] = vu;
    Request req{request_id, function, sim_.now_ms(), false, vu};
    if (!authenticate(s_.access_control, s_.access_control.client_token)) {
      ++result_.totals.denied;
      finish_unplaced(req, Outcome::rejected, "denied");
      return;
    }
    const std::string& origin = s_.instances[loadgen_->vus()[vu].instance].origin_platform;
    if (!origin.empty()) {
      PlatformSim* p = find(origin);
      const Sidecar& sc = sidecars_.at(origin);
      if (p->deployed(function) && !scheduler_->is_failed(origin) &&
          sc.local_or_delegate(function, predict(function, origin).p90_s) == Sidecar::Placement::local) {
        SchedulingDecision d;
        d.request_id = request_id;
        d.policy = "sidecar-local";
        d.platform_id = origin;
        d.node_index = sc.select_node(function);
        d.node_id = p->node_spec(d.node_index).node_id;
        d.rationale = "local within slo";
        d.decided_at_s = sim_.now();
        log_decision(d);
        place(*p, std::move(req), d.node_index);
        return;
      }
    }
    dispatch(std::move(req));
  }

  void dispatch(Request req) {
    auto d = scheduler_->schedule(req.request_id, req.function, sim_.now());
    if (!d) {
      ++result_.totals.outage;
      finish_unplaced(req, Outcome::rejected, "outage");
      return;
    }
    place(*find(d->platform_id), std::move(req), d->node_index);
  }

  void place(PlatformSim& p, Request req, std::size_t node) {
    models_.events.count(req.function, p.id());
    p.invoke(std::move(req), node);
    if (options_.paranoid) p.check_invariants();
  }

  void finish_unplaced(const Request& req, Outcome outcome, const std::string& reason) {
    InvocationRecord rec;
    rec.request_id = req.request_id;
    rec.function = req.function;
    rec.issued_at_s = to_s(req.issued_at);
    rec.started_at_s = sim_.now();
    rec.completed_at_s = sim_.now();
    rec.retried = req.retried;
    rec.outcome = outcome;
    rec.reason = reason;
    on_record_tagged(rec, req.tag);
  }

  void on_record(const InvocationRecord& rec) {
    auto it = vu_by_request_.find(rec.request_id);
    if (it == vu_by_request_.end()) throw InvariantViolation("completion for unknown request " + rec.request_id);
    on_record_tagged(rec, it->second);
  }

  void on_record_tagged(const InvocationRecord& rec, std::size_t vu) {
    vu_by_request_.erase(rec.request_id);
    result_.records.push_back(rec);
    monitor_->record(rec);
    switch (rec.outcome) {
      case Outcome::ok: {
        ++result_.totals.ok;
        PlatformSim* p = find(rec.platform_id);
        if (rec.exec_time_s > 0.0) {
          models_.perf.update(rec.function, rec.platform_id, rec.exec_time_s,
                              p->attributed_energy_j(rec.function, rec.exec_time_s));
        }
        break;
      }
      case Outcome::rejected: ++result_.totals.rejected; break;
      case Outcome::failed: ++result_.totals.failed; break;
    }
    if (options_.paranoid && !rec.platform_id.empty()) find(rec.platform_id)->check_invariants();
    loadgen_->complete(vu, rec.outcome == Outcome::ok);
  }

  void on_abort(const Request& req) {
    if (!req.retried) {
      Request again = req;
      again.retried = true;
      ++result_.totals.retried;
      dispatch(std::move(again));
      return;
    }
    finish_unplaced(req, Outcome::failed, "platform-failed");
  }

  void fail_platform(const std::string& pid) {
    PlatformSim* p = find(pid);
    if (p == nullptr) return;
    scheduler_->mark_failed(pid);
    p->fail();
  }

  void recover_platform(const std::string& pid) {
    PlatformSim* p = find(pid);
    if (p == nullptr) return;
    p->recover();
    scheduler_->mark_recovered(pid);
  }

  void schedule_tick(int k) {
    if (k > monitor_->window_count()) return;
    sim_.schedule_at_ms(monitor_->window_end_ms(k - 1), "monitor.tick", [this, k] {
      tick(k - 1);
      schedule_tick(k + 1);
    });
  }

  void tick(int w) {
    const SimTime t0 = monitor_->window_start_ms(w);
    const SimTime t1 = monitor_->window_end_ms(w);
    for (auto& p : platforms_) {
      InfraSample s;
      double util = 0.0, mem = 0.0;
      for (std::size_t n = 0; n < p->node_count(); ++n) {
        util += p->mean_utilization(n, t0, t1);
        mem += static_cast<double>(p->memory_allocated_mib(n) + p->background_mem_mib(n)) /
               static_cast<double>(p->node_spec(n).memory_mib);
      }
      s.cpu_util = util / static_cast<double>(p->node_count());
      s.mem_util_frac = mem / static_cast<double>(p->node_count());
      s.memory_mib = p->memory_allocated_mib();
      s.replicas = p->replica_count();
      if (data_plane_) {
        const std::int64_t moved = data_plane_->bytes_moved(p->id());
        s.disk_io_bytes = moved - last_bytes_[p->id()];
        last_bytes_[p->id()] = moved;
      }
      s.energy_j = p->energy(t0, t1);
      monitor_->sample(p->id(), w, s);
      for (auto& ps : p->power_samples(t0, t1)) result_.power.push_back(std::move(ps));
      p->autoscale_and_reclaim();
      p->check_invariants();
    }
    if (data_plane_) {
      data_plane_->end_window();
      for (const auto& [obj, to] : data_plane_->auto_migrate()) {
        result_.migrations.push_back(Migration{sim_.now(), obj, to});
      }
    }
    models_.data.end_window();
    models_.events.end_window(to_s(t1 - t0));
    if (s_.prewarm_hints) {
      for (const auto& [fn, pid] : models_.events.keys()) {
        PlatformSim* p = find(pid);
        auto forecast = models_.events.forecast(fn, pid);
        auto exec = models_.perf.exec_s(fn, pid);
        if (p == nullptr || p->failed() || !forecast || !exec) continue;
        const int hint = prewarm_hint(*forecast, *exec, p->live_replicas(fn));
        if (hint > 0) p->start_replicas(fn, hint);
      }
    }
    kb_->append(KnowledgeKind::model_snapshot, w, models_.snapshot_json(w));
  }

  json final_models() const {
    json demand = json::array();
    for (const auto& [fn, pid] : models_.events.keys()) {
      const auto rates = models_.events.rates(fn, pid);
      std::size_t last = rates.size();
      while (last > 0 && rates[last - 1] <= 0.0) --last;
      if (last < 3) continue;
      const double mean = (rates[last - 1] + rates[last - 2] + rates[last - 3]) / 3.0;
      const double exec = models_.perf.exec_s(fn, pid).value_or(0.0);
      demand.push_back(json{{"function", fn}, {"platform", pid}, {"replicas", prewarm_hint(mean, exec, 0)}});
    }
    json homes = json::object();
    json objects = json::object();
    for (const auto& f : deployment_.all_functions) {
      json ids = json::array();
      for (const auto& ref : f.profile.data_objects) {
        ids.push_back(ref.object_id);
        if (data_plane_ && data_plane_->knows_object(ref.object_id)) homes[ref.object_id] = data_plane_->owner_host(ref.object_id);
      }
      objects[f.name] = ids;
    }
    return json{{"final", true}, {"prewarm_demand", demand}, {"data_home", homes}, {"function_objects", objects}};
  }

  void finish() {
    for (auto& p : platforms_) p->check_invariants();
    std::uint64_t in_flight = 0, queued = 0;
    for (auto& p : platforms_) {
      in_flight += static_cast<std::uint64_t>(p->in_flight());
      queued += p->queued_total();
    }
    RunTotals& t = result_.totals;
    t.queued = queued;
    t.in_flight = in_flight - queued;
    if (t.issued != t.ok + t.rejected + t.failed + t.in_flight + t.queued) {
      throw InvariantViolation("request conservation broken: issued " + std::to_string(t.issued) + " != ok " +
                               std::to_string(t.ok) + " + rejected " + std::to_string(t.rejected) + " + failed " +
                               std::to_string(t.failed) + " + in-flight " + std::to_string(t.in_flight) +
                               " + queued " + std::to_string(t.queued));
    }
    if (loadgen_->outstanding() != in_flight) {
      throw InvariantViolation("outstanding virtual-user requests do not match platform in-flight work");
    }

    result_.windows = monitor_->all_windows();
    result_.summary = monitor_->summary();
    result_.dropped = monitor_->dropped();
    if (data_plane_) result_.data_log = data_plane_->log();

    for (const auto& w : result_.windows) {
      kb_->append(KnowledgeKind::metric_series, w.index,
                  json{{"type", "window"},
                       {"series", w.series},
                       {"requests", w.requests},
                       {"p90_s", opt(w.p90_s)},
                       {"cold_starts", w.cold_starts},
                       {"energy_j", opt(w.infra.energy_j)}}
                      .dump());
    }
    // Per (function, platform) outcome used by the deployment generator.
    std::map<std::pair<std::string, std::string>, std::vector<double>> rts;
    std::map<std::pair<std::string, std::string>, double> energy;
    std::map<std::pair<std::string, std::string>, bool> has_energy;
    for (const auto& r : monitor_->records()) {
      if (r.outcome != Outcome::ok) continue;
      auto key = std::make_pair(r.function, r.platform_id);
      rts[key].push_back(r.response_time_s());
      if (auto e = find(r.platform_id)->attributed_energy_j(r.function, r.exec_time_s)) {
        energy[key] += *e;
        has_energy[key] = true;
      }
    }
    for (const auto& [key, values] : rts) {
      const double n = static_cast<double>(values.size());
      kb_->append(KnowledgeKind::metric_series, monitor_->window_count() - 1,
                  json{{"type", "function_summary"},
                       {"function", key.first},
                       {"platform", key.second},
                       {"requests", values.size()},
                       {"p90_s", opt(p90(values))},
                       {"energy_per_request_j", has_energy[key] ? json(energy[key] / n) : json(nullptr)}}
                      .dump());
    }
    kb_->append(KnowledgeKind::model_snapshot, monitor_->window_count() - 1, final_models().dump());
    result_.knowledge = kb_->query(result_.run_id);
    kb_->close();
    if (monitor_->dropped() > 0) {
      result_.warnings.push_back(std::to_string(monitor_->dropped()) + " records completed after collection ended");
    }
    sim_.set_trace(nullptr);
  }

  const ScenarioConfig& s_;
  const RunOptions& options_;
  Deployment deployment_;
  RunResult result_;
  Simulator sim_;
  std::ofstream trace_;
  std::optional<Monitor> monitor_;
  std::unique_ptr<DataPlane> data_plane_;
  std::vector<std::unique_ptr<PlatformSim>> platforms_;
  std::unique_ptr<Scheduler> scheduler_;
  std::map<std::string, Sidecar> sidecars_;
  std::unique_ptr<LoadGenerator> loadgen_;
  std::unique_ptr<KnowledgeStore> kb_;
  BehaviorModels models_;
  std::map<std::string, std::int64_t> last_bytes_;
  std::map<std::string, std::size_t> vu_by_request_;
};

}  // namespace

std::map<std::string, double> benchmark_platforms(const ScenarioConfig& scenario, const Catalog& catalog) {
  if (!scenario.benchmark.results.empty()) return scenario.benchmark.results;
  std::map<std::string, double> out;
  if (scenario.instances.empty()) return out;
  const std::string fn = scenario.instances.front().function;
  const FunctionSpec* f = catalog.find_function(fn);
  if (f == nullptr) throw ValidationError("scenario names unknown function '" + fn + "'");
  for (const auto& pid : scenario.platform_ids) {
    if (!f->profile.base_service_s.contains(pid) || catalog.find_platform(pid) == nullptr) continue;
    ScenarioConfig b;
    b.test_name = "benchmark";
    b.platform_ids = {pid};
    b.instances = {TestInstance{"bench", fn, TestSettings{scenario.benchmark.vus, scenario.benchmark.duration_s, 0.0, ""}, ""}};
    b.policy = RankedBest{};
    b.seed = scenario.seed;
    b.sampling_interval_s = std::min(scenario.sampling_interval_s, scenario.benchmark.duration_s);
    b.collection_duration_s = scenario.benchmark.duration_s;
    b.benchmark.results = {{pid, 1.0}};
    b.data_plane = scenario.data_plane;
    b.data_plane.migration.enabled = false;
    const RunResult r = run_scenario(b, catalog);
    out[pid] = static_cast<double>(r.summary_for(pid).requests) / scenario.benchmark.duration_s;
  }
  return out;
}

RunResult run_scenario(const ScenarioConfig& scenario, const Catalog& catalog, const RunOptions& options) {
  validate_scenario(scenario);
  Engine engine(scenario, catalog, options);
  RunResult result = engine.run();
  if (!options.out_dir.empty()) write_outputs(result, options.out_dir);
  return result;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::ok: return "ok";
    case Outcome::rejected: return "rejected";
    case Outcome::failed: return "failed";
  }
  return "?";
}

}  // namespace

void write_outputs(const RunResult& r, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "metrics.csv", metrics_csv(r.windows));
  write_file(out_dir / "metrics.json", metrics_json(r.windows));
  write_file(out_dir / "decisions.tsv", decisions_tsv(r.decisions));

  std::ostringstream power;
  power << "node_id,t_ms,power_w\n";
  for (const auto& p : r.power) power << p.node_id << ',' << to_ms(p.t_s) << ',' << num(p.power_w) << '\n';
  write_file(out_dir / "power.csv", power.str());

  std::ostringstream data;
  data << "t_ms,function,object,platform,kind,hit,latency_ms\n";
  for (const auto& a : r.data_log) {
    data << a.t << ',' << a.function << ',' << a.object_id << ',' << a.platform_id << ','
         << (a.kind == AccessKind::read ? "read" : "write") << ',' << (a.hit ? "hit" : "miss") << ','
         << num(a.latency_s * 1000.0) << '\n';
  }
  write_file(out_dir / "data_access.csv", data.str());

  std::ostringstream inv;
  inv << "request_id,function,issued_at_s,started_at_s,completed_at_s,platform,node,cold_start,retried,outcome,"
         "exec_time_s,reason\n";
  for (const auto& x : r.records) {
    inv << x.request_id << ',' << x.function << ',' << num(x.issued_at_s) << ',' << num(x.started_at_s) << ','
        << num(x.completed_at_s) << ',' << x.platform_id << ',' << x.node_id << ',' << (x.cold_start ? 1 : 0) << ','
        << (x.retried ? 1 : 0) << ',' << outcome_name(x.outcome) << ',' << num(x.exec_time_s) << ',' << x.reason
        << '\n';
  }
  write_file(out_dir / "invocations.csv", inv.str());

  json doc = json::parse(summary_json(r.summary, r.run_id, r.policy, r.seed, r.dropped));
  doc["totals"] = json{{"issued", r.totals.issued},     {"ok", r.totals.ok},
                       {"rejected", r.totals.rejected}, {"failed", r.totals.failed},
                       {"in_flight", r.totals.in_flight}, {"queued", r.totals.queued},
                       {"denied", r.totals.denied},     {"outage", r.totals.outage},
                       {"retried", r.totals.retried}};
  doc["rank"] = r.rank;
  doc["benchmark_rps"] = r.benchmark;
  doc["sampling_interval_s"] = r.sampling_interval_s;
  doc["collection_duration_s"] = r.collection_duration_s;
  doc["platforms"] = r.platforms;
  json mig = json::array();
  for (const auto& m : r.migrations) mig.push_back(json{{"t_s", m.t_s}, {"object", m.object_id}, {"to", m.to_platform}});
  doc["migrations"] = mig;
  doc["warnings"] = r.warnings;
  write_file(out_dir / "summary.json", doc.dump(2) + "\n");
}

}  // namespace fdn
