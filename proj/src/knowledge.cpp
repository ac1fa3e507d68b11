#include "fdn/knowledge.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "fdn/errors.hpp"
#include "json_util.hpp"

namespace fdn {

using detail::json;

namespace {

constexpr KnowledgeKind kAllKinds[] = {KnowledgeKind::decision, KnowledgeKind::model_snapshot,
                                       KnowledgeKind::metric_series, KnowledgeKind::benchmark_result};

std::optional<KnowledgeKind> kind_from_name(const std::string& name) {
  for (KnowledgeKind k : kAllKinds) {
    if (name == knowledge_kind_name(k)) return k;
  }
  return std::nullopt;
}

std::string record_line(const KnowledgeRecord& r) {
  json head{{"run_id", r.run_id}, {"kind", knowledge_kind_name(r.kind)}, {"window", r.window_index}, {"seq", r.sequence}};
  std::string line = head.dump();
  line.pop_back();
  return line + ",\"payload\":" + r.payload + "}";
}

KnowledgeRecord parse_line(const std::string& line) {
  const json j = detail::parse_json(line, "knowledge record");
  KnowledgeRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  auto k = kind_from_name(j.at("kind").get<std::string>());
  if (!k) throw ValidationError("knowledge record: unknown kind");
  r.kind = *k;
  r.window_index = j.at("window").get<int>();
  r.sequence = j.at("seq").get<std::uint64_t>();
  r.payload = j.at("payload").dump();
  return r;
}

}  // namespace

const char* knowledge_kind_name(KnowledgeKind k) {
  switch (k) {
    case KnowledgeKind::decision: return "decision";
    case KnowledgeKind::model_snapshot: return "model_snapshot";
    case KnowledgeKind::metric_series: return "metric_series";
    case KnowledgeKind::benchmark_result: return "benchmark_result";
  }
  return "?";
}

const char* knowledge_file_stem(KnowledgeKind k) {
  switch (k) {
    case KnowledgeKind::decision: return "decisions";
    case KnowledgeKind::model_snapshot: return "models";
    case KnowledgeKind::metric_series: return "metrics";
    case KnowledgeKind::benchmark_result: return "benchmarks";
  }
  return "?";
}

KnowledgeStore::~KnowledgeStore() {
  if (open_) close();
}

void KnowledgeStore::open(const std::string& run_id) {
  if (open_) close();
  if (run_id.empty() || run_id.find('/') != std::string::npos) throw KnowledgeError("invalid run id '" + run_id + "'");
  run_id_ = run_id;
  sequence_ = 0;
  open_ = true;
  memory_[run_id].clear();
  if (root_.empty()) return;
  const auto dir = root_ / "runs" / run_id;
  std::filesystem::create_directories(dir);
  for (KnowledgeKind k : kAllKinds) {
    std::ofstream out(dir / (std::string(knowledge_file_stem(k)) + ".ndjson"), std::ios::trunc);
    if (!out) throw KnowledgeError("cannot write knowledge store under " + dir.string());
    files_[k] = std::move(out);
  }
}

void KnowledgeStore::append(KnowledgeKind kind, int window_index, std::string payload) {
  if (!open_) throw KnowledgeError("knowledge store: run is closed");
  KnowledgeRecord r{run_id_, kind, window_index, sequence_++, std::move(payload)};
  if (!root_.empty()) files_.at(kind) << record_line(r) << '\n';
  memory_[run_id_].push_back(std::move(r));
}

void KnowledgeStore::close() {
  for (auto& [k, f] : files_) f.flush();
  files_.clear();
  open_ = false;
}

std::vector<KnowledgeRecord> KnowledgeStore::query(const std::string& run_id, std::optional<KnowledgeKind> kind) const {
  std::vector<KnowledgeRecord> all;
  if (auto it = memory_.find(run_id); it != memory_.end()) {
    all = it->second;
  } else if (!root_.empty()) {
    all = load_run(root_, run_id);
  }
  if (kind) std::erase_if(all, [&](const KnowledgeRecord& r) { return r.kind != *kind; });
  return all;
}

std::vector<std::string> KnowledgeStore::runs() const {
  std::vector<std::string> out;
  for (const auto& [id, recs] : memory_) out.push_back(id);
  if (!root_.empty() && std::filesystem::exists(root_ / "runs")) {
    for (const auto& e : std::filesystem::directory_iterator(root_ / "runs")) {
      if (e.is_directory()) out.push_back(e.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<KnowledgeRecord> load_run(const std::filesystem::path& root, const std::string& run_id) {
  std::vector<KnowledgeRecord> out;
  const auto dir = root / "runs" / run_id;
  if (!std::filesystem::exists(dir)) return out;
  for (KnowledgeKind k : kAllKinds) {
    std::ifstream in(dir / (std::string(knowledge_file_stem(k)) + ".ndjson"));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) out.push_back(parse_line(line));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const KnowledgeRecord& a, const KnowledgeRecord& b) { return a.sequence < b.sequence; });
  return out;
}

AnnotatedDeployment annotate(const std::vector<std::string>& functions, const std::vector<std::string>& platforms,
                             const std::vector<KnowledgeRecord>& history, const SloSpec& slo) {
  AnnotatedDeployment out;
  out.functions = functions;
  out.platforms = platforms;
  if (history.empty()) {
    out.warnings.push_back("no history; deployment left unannotated");
    return out;
  }
  struct Stats {
    std::optional<double> p90;
    std::optional<double> energy;
  };
  std::map<std::string, std::map<std::string, Stats>> stats;  // function -> platform
  json final_models;
  for (const auto& r : history) {
    const json p = json::parse(r.payload);
    if (r.kind == KnowledgeKind::metric_series && p.value("type", "") == "function_summary") {
      Stats s;
      if (p.contains("p90_s") && !p["p90_s"].is_null()) s.p90 = p["p90_s"].get<double>();
      if (p.contains("energy_per_request_j") && !p["energy_per_request_j"].is_null()) {
        s.energy = p["energy_per_request_j"].get<double>();
      }
      stats[p.at("function").get<std::string>()][p.at("platform").get<std::string>()] = s;
    } else if (r.kind == KnowledgeKind::model_snapshot && p.value("final", false)) {
      final_models = p;
    }
  }
  const std::set<std::string> allowed(platforms.begin(), platforms.end());
  for (const auto& fn : functions) {
    auto it = stats.find(fn);
    if (it == stats.end()) {
      out.warnings.push_back("function '" + fn + "' absent from history");
      continue;
    }
    std::string best_meeting, best_any;
    double e_best = std::numeric_limits<double>::infinity(), p_meet = e_best, p_any = e_best;
    for (const auto& [pid, s] : it->second) {
      if (!allowed.contains(pid) || !s.p90) continue;
      if (*s.p90 < p_any) {
        p_any = *s.p90;
        best_any = pid;
      }
      if (*s.p90 <= slo.p90_response_s) {
        const double e = s.energy.value_or(std::numeric_limits<double>::infinity());
        if (e < e_best || (e == e_best && *s.p90 < p_meet)) {
          e_best = e;
          p_meet = *s.p90;
          best_meeting = pid;
        }
      }
    }
    if (best_any.empty()) {
      out.warnings.push_back("function '" + fn + "' has no completed requests in history");
      continue;
    }
    FunctionAnnotation a;
    a.preferred_platform = best_meeting.empty() ? best_any : best_meeting;
    if (final_models.is_object()) {
      int fallback = 0;
      for (const auto& d : final_models.value("prewarm_demand", json::array())) {
        if (d.at("function") != fn) continue;
        const int n = d.at("replicas").get<int>();
        if (d.at("platform") == a.preferred_platform) a.prewarm_count = n;
        fallback = std::max(fallback, n);
      }
      if (a.prewarm_count == 0) a.prewarm_count = fallback;
      const json homes = final_models.value("data_home", json::object());
      for (const auto& obj : final_models.value("function_objects", json::object()).value(fn, json::array())) {
        const std::string id = obj.get<std::string>();
        if (auto h = homes.find(id); h != homes.end()) a.data_home[id] = h->get<std::string>();
      }
    }
    out.annotations[fn] = a;
  }
  return out;
}

std::string annotated_to_json(const AnnotatedDeployment& a) {
  json ann = json::object();
  for (const auto& [fn, x] : a.annotations) {
    ann[fn] = json{{"preferred_platform", x.preferred_platform}, {"prewarm_count", x.prewarm_count}, {"data_home", x.data_home}};
  }
  json doc{{"functions", a.functions}, {"platforms", a.platforms}, {"annotations", ann}, {"warnings", a.warnings}};
  return doc.dump(2) + "\n";
}

AnnotatedDeployment parse_annotated(const std::string& document) {
  const json doc = detail::parse_json(document, "annotated deployment");
  AnnotatedDeployment a;
  try {
    a.functions = doc.value("functions", std::vector<std::string>{});
    a.platforms = doc.value("platforms", std::vector<std::string>{});
    a.warnings = doc.value("warnings", std::vector<std::string>{});
    const json annotations = doc.value("annotations", json::object());
    for (const auto& [fn, x] : annotations.items()) {
      FunctionAnnotation f;
      f.preferred_platform = x.value("preferred_platform", "");
      f.prewarm_count = x.value("prewarm_count", 0);
      f.data_home = x.value("data_home", std::map<std::string, std::string>{});
      if (f.prewarm_count < 0) throw ValidationError("annotated deployment: negative prewarm_count");
      a.annotations[fn] = f;
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("annotated deployment: ") + e.what());
  }
  return a;
}

}  // namespace fdn
