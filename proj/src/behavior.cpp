#include "fdn/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdn/errors.hpp"
#include "json_util.hpp"

namespace fdn {

using detail::json;

PerfModel::PerfModel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("EWMA alpha must lie in (0, 1]");
}

void PerfModel::update(const std::string& function, const std::string& platform, double exec_s,
                       std::optional<double> energy_j) {
  if (!(exec_s > 0.0)) throw ValidationError("execution time must be positive");
  Entry& e = entries_[{function, platform}];
  if (e.samples == 0) {
    e.ewma_exec_s = exec_s;
    e.ewma_energy_j = energy_j;
  } else {
    e.ewma_exec_s = alpha_ * exec_s + (1.0 - alpha_) * e.ewma_exec_s;
    if (energy_j) {
      e.ewma_energy_j = e.ewma_energy_j ? alpha_ * *energy_j + (1.0 - alpha_) * *e.ewma_energy_j : *energy_j;
    }
  }
  ++e.samples;
}

void PerfModel::set_prior(const std::string& function, const std::string& platform, double exec_s,
                          std::optional<double> energy_j) {
  priors_[{function, platform}] = Entry{exec_s, energy_j, 0};
}

const PerfModel::Entry* PerfModel::find(const std::string& function, const std::string& platform) const {
  auto it = entries_.find({function, platform});
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<double> PerfModel::exec_s(const std::string& function, const std::string& platform) const {
  if (const Entry* e = find(function, platform)) return e->ewma_exec_s;
  auto p = priors_.find({function, platform});
  if (p != priors_.end()) return p->second.ewma_exec_s;
  return std::nullopt;
}

std::optional<double> PerfModel::energy_j(const std::string& function, const std::string& platform) const {
  if (const Entry* e = find(function, platform)) return e->ewma_energy_j;
  auto p = priors_.find({function, platform});
  if (p != priors_.end()) return p->second.ewma_energy_j;
  return std::nullopt;
}

double predict_p90(double exec_s, double offered_rate_per_s, int serving_capacity, bool warm_expected,
                   double cold_start_s) {
  double factor = 1.0;
  const double demand = offered_rate_per_s * exec_s;
  if (serving_capacity <= 0) {
    factor = demand > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  } else {
    factor = std::max(1.0, demand / serving_capacity);
  }
  return exec_s * factor + (warm_expected ? 0.0 : cold_start_s);
}

int prewarm_hint(double forecast_rate_per_s, double exec_s, int warm_replicas) {
  const double need = std::ceil(forecast_rate_per_s * exec_s - 1e-9);
  return std::max(0, static_cast<int>(need) - warm_replicas);
}

void EventModel::count(const std::string& function, const std::string& platform) {
  auto key = std::make_pair(function, platform);
  if (!history_.contains(key)) history_[key] = std::vector<double>(static_cast<std::size_t>(windows_), 0.0);
  ++current_[key];
}

void EventModel::end_window(double interval_s) {
  for (auto& [key, rates] : history_) {
    auto it = current_.find(key);
    const double n = it == current_.end() ? 0.0 : static_cast<double>(it->second);
    rates.push_back(n / interval_s);
  }
  current_.clear();
  ++windows_;
}

std::vector<double> EventModel::rates(const std::string& function, const std::string& platform) const {
  auto it = history_.find({function, platform});
  return it == history_.end() ? std::vector<double>(static_cast<std::size_t>(windows_), 0.0) : it->second;
}

std::optional<double> EventModel::forecast(const std::string& function, const std::string& platform) const {
  if (windows_ < 3) return std::nullopt;
  const auto r = rates(function, platform);
  return (r[r.size() - 1] + r[r.size() - 2] + r[r.size() - 3]) / 3.0;
}

std::vector<std::pair<std::string, std::string>> EventModel::keys() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, rates] : history_) out.push_back(key);
  return out;
}

void DataAccessModel::record(const std::string& function, const std::string& object, const std::string& platform,
                             bool write) {
  Key key{function, object, platform};
  Counters& c = current_[key];
  Counters& t = totals_[key];
  if (write) {
    ++c.writes;
    ++t.writes;
  } else {
    ++c.reads;
    ++t.reads;
  }
}

void DataAccessModel::end_window() {
  history_.push_back(std::move(current_));
  current_.clear();
}

DataAccessModel::Counters DataAccessModel::total(const std::string& function, const std::string& object,
                                                 const std::string& platform) const {
  auto it = totals_.find(Key{function, object, platform});
  return it == totals_.end() ? Counters{} : it->second;
}

bool InteractionModel::record(const std::string& producer, const std::string& consumer) {
  std::int64_t& w = edges_[{producer, consumer}];
  ++w;
  if (w == threshold_ + 1) {
    recommended_.emplace_back(producer, consumer);
    return true;
  }
  return false;
}

std::int64_t InteractionModel::weight(const std::string& producer, const std::string& consumer) const {
  auto it = edges_.find({producer, consumer});
  return it == edges_.end() ? 0 : it->second;
}

std::string BehaviorModels::snapshot_json(int window) const {
  json perf_arr = json::array();
  for (const auto& [key, e] : perf.entries()) {
    perf_arr.push_back(json{{"function", key.first},
                            {"platform", key.second},
                            {"ewma_exec_s", e.ewma_exec_s},
                            {"ewma_energy_j", e.ewma_energy_j ? json(*e.ewma_energy_j) : json(nullptr)},
                            {"samples", e.samples}});
  }
  json forecasts = json::array();
  for (const auto& [fn, pid] : events.keys()) {
    auto f = events.forecast(fn, pid);
    forecasts.push_back(json{{"function", fn}, {"platform", pid}, {"forecast_rate_per_s", f ? json(*f) : json(nullptr)}});
  }
  json edges = json::array();
  for (const auto& [key, w] : interactions.edges()) {
    edges.push_back(json{{"producer", key.first}, {"consumer", key.second}, {"weight", w}});
  }
  json recs = json::array();
  for (const auto& [a, b] : interactions.recommendations()) recs.push_back(json::array({a, b}));
  json doc{{"window", window},
           {"perf", perf_arr},
           {"events", forecasts},
           {"interactions", edges},
           {"colocation", recs}};
  return doc.dump();
}

}  // namespace fdn
