#include "fdn/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "fdn/catalog.hpp"
#include "fdn/errors.hpp"
#include "json_util.hpp"
#include "text_util.hpp"

namespace fdn {

using detail::json;
using detail::num;

const std::vector<std::string>& comparable_metrics() {
  static const std::vector<std::string> names = {
      "requests", "rejected",   "failed",        "cold_starts", "p90_s",    "mean_response_s", "exec_p90_s",
      "cpu_util", "mem_util_frac", "memory_mib", "replicas",    "disk_io_bytes", "energy_j"};
  return names;
}

namespace {

bool is_counter(const std::string& m) {
  return m == "requests" || m == "rejected" || m == "failed" || m == "cold_starts" || m == "disk_io_bytes" ||
         m == "energy_j";
}

struct LoadedRun {
  std::string label;
  double interval_s = 0.0;
  std::vector<std::string> series_order;
  std::map<std::string, std::map<int, std::pair<double, std::optional<double>>>> values;  // series -> window -> (t, v)
  std::map<std::string, std::optional<double>> summary_p90;
};

LoadedRun load(const std::filesystem::path& dir, const std::string& metric) {
  LoadedRun r;
  r.label = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
  const json summary = detail::parse_json(read_text_file((dir / "summary.json").string()), "summary.json");
  const json windows = detail::parse_json(read_text_file((dir / "metrics.json").string()), "metrics.json");
  r.interval_s = summary.value("sampling_interval_s", 0.0);
  const json series_summary = summary.value("series", json::object());
  for (const auto& [series, s] : series_summary.items()) {
    r.summary_p90[series] = s.contains("p90_s") && !s["p90_s"].is_null() ? std::optional(s["p90_s"].get<double>())
                                                                         : std::nullopt;
  }
  for (const auto& w : windows) {
    const std::string series = w.at("series").get<std::string>();
    if (!r.values.contains(series)) r.series_order.push_back(series);
    std::optional<double> v;
    if (w.contains(metric) && !w[metric].is_null()) v = w[metric].get<double>();
    r.values[series][w.at("window").get<int>()] = {w.at("t_start_s").get<double>(), v};
  }
  return r;
}

std::optional<double> total_of(const LoadedRun& r, const std::string& series, const std::string& metric) {
  if (metric == "p90_s") {
    auto it = r.summary_p90.find(series);
    return it == r.summary_p90.end() ? std::nullopt : it->second;
  }
  auto it = r.values.find(series);
  if (it == r.values.end()) return std::nullopt;
  double sum = 0.0;
  int n = 0;
  for (const auto& [idx, tv] : it->second) {
    if (tv.second) {
      sum += *tv.second;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return is_counter(metric) ? sum : sum / n;
}

}  // namespace

Comparison compare_runs(const std::vector<std::filesystem::path>& run_dirs, const std::string& metric) {
  if (run_dirs.size() < 2) throw ValidationError("compare needs at least two runs");
  const auto& names = comparable_metrics();
  if (std::find(names.begin(), names.end(), metric) == names.end()) {
    throw ValidationError("unknown metric '" + metric + "'");
  }
  std::vector<LoadedRun> runs;
  for (const auto& d : run_dirs) runs.push_back(load(d, metric));
  for (const auto& r : runs) {
    if (r.interval_s != runs.front().interval_s) {
      throw ValidationError("incompatible sampling intervals: " + num(runs.front().interval_s) + " s vs " +
                            num(r.interval_s) + " s");
    }
  }
  // Labels must be distinct to serve as column names.
  std::map<std::string, int> seen;
  for (auto& r : runs) {
    if (seen[r.label]++ > 0) r.label += "#" + std::to_string(seen[r.label]);
  }

  std::vector<std::string> series;
  for (const auto& r : runs) {
    for (const auto& s : r.series_order) {
      if (std::find(series.begin(), series.end(), s) == series.end()) series.push_back(s);
    }
  }

  Comparison c;
  c.metric = metric;
  std::ostringstream csv;
  csv << "series,window,t_start_s";
  for (const auto& r : runs) csv << ',' << r.label;
  for (std::size_t i = 1; i < runs.size(); ++i) csv << ",delta_" << runs[i].label;
  csv << '\n';
  for (const auto& s : series) {
    int max_window = -1;
    for (const auto& r : runs) {
      if (auto it = r.values.find(s); it != r.values.end() && !it->second.empty()) {
        max_window = std::max(max_window, it->second.rbegin()->first);
      }
    }
    for (int w = 0; w <= max_window; ++w) {
      std::vector<std::optional<double>> vals;
      double t = w * runs.front().interval_s;
      for (const auto& r : runs) {
        std::optional<double> v;
        if (auto it = r.values.find(s); it != r.values.end()) {
          if (auto jt = it->second.find(w); jt != it->second.end()) {
            v = jt->second.second;
            t = jt->second.first;
          }
        }
        vals.push_back(v);
      }
      csv << s << ',' << w << ',' << num(t);
      for (const auto& v : vals) csv << ',' << num(v);
      for (std::size_t i = 1; i < vals.size(); ++i) {
        csv << ',';
        if (vals[i] && vals[0]) csv << num(*vals[i] - *vals[0]);
      }
      csv << '\n';
    }
  }
  c.csv = csv.str();

  std::ostringstream table;
  table << "metric\t" << metric << '\n' << "series\trun\ttotal\tdelta\tratio\n";
  for (const auto& r : runs) {
    RunColumn col;
    col.label = r.label;
    for (const auto& s : series) col.totals.emplace_back(s, total_of(r, s, metric));
    c.runs.push_back(std::move(col));
  }
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto base = c.runs.front().totals[si].second;
    for (const auto& col : c.runs) {
      const auto v = col.totals[si].second;
      table << series[si] << '\t' << col.label << '\t' << (v ? num(*v) : "null") << '\t';
      table << ((v && base) ? num(*v - *base) : "null") << '\t';
      table << ((v && base && *base != 0.0) ? num(*v / *base) : "null") << '\n';
    }
  }
  c.table = table.str();
  return c;
}

std::size_t policy_count() { return 6; }

std::string list_policies_text() {
  return "ranked-best\t(no parameters)\t{}\n"
         "utilization-aware\tcpu_cutoff_frac\t{\"cpu_cutoff_frac\": \"real in (0,1], default 0.9\"}\n"
         "round-robin-collab\tplatforms\t{\"platforms\": \"non-empty ordered list of platform ids\"}\n"
         "weighted-collab\tweights\t{\"weights\": \"list of {platform: id, weight: integer >= 1}\"}\n"
         "data-locality\t(no parameters)\t{}\n"
         "energy-aware\tslo\t{\"slo\": {\"p90_response_s\": \"positive seconds, default 7\"}}\n";
}

}  // namespace fdn
