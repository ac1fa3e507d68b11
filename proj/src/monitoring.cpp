#include "fdn/monitoring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdn/errors.hpp"
#include "json_util.hpp"
#include "text_util.hpp"

namespace fdn {

using detail::json;
using detail::num;

std::optional<double> nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

Monitor::Monitor(double sampling_interval_s, double collection_duration_s, std::vector<std::string> platforms)
    : interval_ms_(to_ms(sampling_interval_s)),
      collection_ms_(to_ms(collection_duration_s)),
      window_count_(0),
      platforms_(std::move(platforms)) {
  if (interval_ms_ <= 0) throw ValidationError("sampling interval must be positive");
  if (collection_ms_ <= 0) throw ValidationError("collection duration must be positive");
  window_count_ = static_cast<int>((collection_ms_ + interval_ms_ - 1) / interval_ms_);
}

SimTime Monitor::window_end_ms(int index) const { return std::min(collection_ms_, interval_ms_ * (index + 1)); }

int Monitor::window_of(double t_s) const {
  const SimTime t = to_ms(t_s);
  if (t < 0 || t >= collection_ms_) return -1;
  return static_cast<int>(t / interval_ms_);
}

void Monitor::record(const InvocationRecord& rec) {
  if (window_of(rec.completed_at_s) < 0) {
    ++dropped_;
    return;
  }
  records_.push_back(rec);
}

void Monitor::sample(const std::string& platform_id, int window, InfraSample s) {
  if (window < 0 || window >= window_count_) return;
  infra_[platform_id][window] = s;
}

std::vector<MetricWindow> Monitor::windows(const std::string& series) const {
  const bool all = series == kAllSeries;
  std::vector<MetricWindow> out(static_cast<std::size_t>(window_count_));
  std::vector<std::vector<double>> rts(out.size());
  std::vector<std::vector<double>> execs(out.size());
  for (int i = 0; i < window_count_; ++i) {
    out[i].series = series;
    out[i].index = i;
    out[i].t_start_s = to_s(window_start_ms(i));
    out[i].t_end_s = to_s(window_end_ms(i));
  }
  for (const auto& r : records_) {
    if (!all && r.platform_id != series) continue;
    MetricWindow& w = out[static_cast<std::size_t>(window_of(r.completed_at_s))];
    switch (r.outcome) {
      case Outcome::ok:
        ++w.requests;
        if (r.cold_start) ++w.cold_starts;
        rts[static_cast<std::size_t>(w.index)].push_back(r.response_time_s());
        execs[static_cast<std::size_t>(w.index)].push_back(r.exec_time_s);
        break;
      case Outcome::rejected: ++w.rejected; break;
      case Outcome::failed: ++w.failed; break;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!rts[i].empty()) {
      double sum = 0.0;
      for (double v : rts[i]) sum += v;
      out[i].mean_response_s = sum / static_cast<double>(rts[i].size());
    }
    out[i].p90_s = p90(std::move(rts[i]));
    out[i].exec_p90_s = p90(std::move(execs[i]));
  }
  auto fill = [&](const std::string& pid, bool accumulate) {
    auto it = infra_.find(pid);
    if (it == infra_.end()) return;
    for (const auto& [idx, s] : it->second) {
      InfraSample& dst = out[static_cast<std::size_t>(idx)].infra;
      if (!accumulate) {
        dst = s;
        continue;
      }
      dst.cpu_util += s.cpu_util / static_cast<double>(platforms_.size());
      dst.mem_util_frac += s.mem_util_frac / static_cast<double>(platforms_.size());
      dst.memory_mib += s.memory_mib;
      dst.replicas += s.replicas;
      dst.disk_io_bytes += s.disk_io_bytes;
      if (s.energy_j) dst.energy_j = dst.energy_j.value_or(0.0) + *s.energy_j;
    }
  };
  if (all) {
    for (const auto& pid : platforms_) fill(pid, true);
  } else {
    fill(series, false);
  }
  return out;
}

std::vector<MetricWindow> Monitor::all_windows() const {
  std::vector<MetricWindow> out;
  for (const auto& pid : platforms_) {
    auto w = windows(pid);
    out.insert(out.end(), w.begin(), w.end());
  }
  auto w = windows(kAllSeries);
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

SeriesSummary Monitor::summarize(const std::string& series) const {
  const bool all = series == kAllSeries;
  SeriesSummary s;
  s.series = series;
  std::vector<double> rts;
  double sum = 0.0;
  for (const auto& r : records_) {
    if (!all && r.platform_id != series) continue;
    switch (r.outcome) {
      case Outcome::ok:
        ++s.requests;
        if (r.cold_start) ++s.cold_starts;
        rts.push_back(r.response_time_s());
        sum += r.response_time_s();
        break;
      case Outcome::rejected: ++s.rejected; break;
      case Outcome::failed: ++s.failed; break;
    }
  }
  if (!rts.empty()) s.mean_response_s = sum / static_cast<double>(rts.size());
  s.p90_s = p90(std::move(rts));
  s.throughput_rps = static_cast<double>(s.requests) / to_s(collection_ms_);
  for (const auto& [pid, samples] : infra_) {
    if (!all && pid != series) continue;
    for (const auto& [idx, sample] : samples) {
      if (sample.energy_j) s.energy_j = s.energy_j.value_or(0.0) + *sample.energy_j;
    }
  }
  return s;
}

std::vector<SeriesSummary> Monitor::summary() const {
  std::vector<SeriesSummary> out;
  for (const auto& pid : platforms_) out.push_back(summarize(pid));
  out.push_back(summarize(kAllSeries));
  return out;
}

std::string metrics_csv(const std::vector<MetricWindow>& windows) {
  std::ostringstream os;
  os << "series,window,t_start_s,t_end_s,requests,rejected,failed,cold_starts,p90_s,mean_response_s,"
        "exec_p90_s,cpu_util,mem_util_frac,memory_mib,replicas,disk_io_bytes,energy_j\n";
  for (const auto& w : windows) {
    os << w.series << ',' << w.index << ',' << num(w.t_start_s) << ',' << num(w.t_end_s) << ',' << w.requests << ','
       << w.rejected << ',' << w.failed << ',' << w.cold_starts << ',' << num(w.p90_s) << ','
       << num(w.mean_response_s) << ',' << num(w.exec_p90_s) << ',' << num(w.infra.cpu_util) << ','
       << num(w.infra.mem_util_frac) << ',' << w.infra.memory_mib << ','
       << w.infra.replicas << ',' << w.infra.disk_io_bytes << ',' << num(w.infra.energy_j) << '\n';
  }
  return os.str();
}

namespace {
json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
}  // namespace

std::string metrics_json(const std::vector<MetricWindow>& windows) {
  json arr = json::array();
  for (const auto& w : windows) {
    arr.push_back(json{{"series", w.series},
                       {"window", w.index},
                       {"t_start_s", w.t_start_s},
                       {"t_end_s", w.t_end_s},
                       {"requests", w.requests},
                       {"rejected", w.rejected},
                       {"failed", w.failed},
                       {"cold_starts", w.cold_starts},
                       {"p90_s", opt(w.p90_s)},
                       {"mean_response_s", opt(w.mean_response_s)},
                       {"exec_p90_s", opt(w.exec_p90_s)},
                       {"cpu_util", w.infra.cpu_util},
                       {"mem_util_frac", w.infra.mem_util_frac},
                       {"memory_mib", w.infra.memory_mib},
                       {"replicas", w.infra.replicas},
                       {"disk_io_bytes", w.infra.disk_io_bytes},
                       {"energy_j", opt(w.infra.energy_j)}});
  }
  return arr.dump(1) + "\n";
}

std::string summary_json(const std::vector<SeriesSummary>& summary, const std::string& run_id,
                         const std::string& policy, std::uint64_t seed, std::uint64_t dropped) {
  json series = json::object();
  for (const auto& s : summary) {
    series[s.series] = json{{"requests", s.requests},
                            {"rejected", s.rejected},
                            {"failed", s.failed},
                            {"cold_starts", s.cold_starts},
                            {"p90_s", opt(s.p90_s)},
                            {"mean_response_s", opt(s.mean_response_s)},
                            {"energy_j", opt(s.energy_j)},
                            {"throughput_rps", s.throughput_rps}};
  }
  json doc{{"run_id", run_id}, {"policy", policy}, {"seed", seed}, {"dropped_records", dropped}, {"series", series}};
  return doc.dump(2) + "\n";
}

}  // namespace fdn
