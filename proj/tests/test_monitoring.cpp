#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fdn/monitoring.hpp"

using namespace fdn;

namespace {

InvocationRecord done(const std::string& platform, double issued, double completed, bool cold = false) {
  InvocationRecord r;
  r.request_id = platform + std::to_string(completed);
  r.function = "f";
  r.platform_id = platform;
  r.issued_at_s = issued;
  r.started_at_s = issued;
  r.completed_at_s = completed;
  r.cold_start = cold;
  r.exec_time_s = completed - issued;
  return r;
}

}  // namespace

TEST(P90, AllEqual) { EXPECT_EQ(p90({5, 5, 5, 5}), 5.0); }

TEST(P90, TenDistinct) {
  // 1-based rank ceil(0.9 * 10) = 9.
  EXPECT_EQ(p90({10, 3, 1, 7, 2, 9, 4, 6, 8, 5}), 9.0);
}

TEST(P90, EmptyHasNoValue) { EXPECT_FALSE(p90({}).has_value()); }

TEST(P90, SingleValue) { EXPECT_EQ(p90({0.25}), 0.25); }

TEST(P90, ElevenValues) {
  // ceil(9.9) = 10th order statistic.
  std::vector<double> v;
  for (int i = 1; i <= 11; ++i) v.push_back(i);
  EXPECT_EQ(p90(v), 10.0);
}

TEST(Monitor, CompletionWindowAssignment) {
  Monitor m(10.0, 1200.0, {"p"});
  EXPECT_EQ(m.window_of(19.9), 1);
  EXPECT_EQ(m.window_of(20.0), 2);
  EXPECT_EQ(m.window_of(0.0), 0);
  EXPECT_EQ(m.window_of(1200.0), -1);
}

TEST(Monitor, HundredTwentyWindows) {
  Monitor m(10.0, 1200.0, {"p"});
  EXPECT_EQ(m.window_count(), 120);
  EXPECT_EQ(m.windows("p").size(), 120u);
}

TEST(Monitor, CountsAndColdStarts) {
  Monitor m(10.0, 100.0, {"p"});
  m.record(done("p", 10.5, 11.5, true));
  m.record(done("p", 12.0, 15.0));
  const auto w = m.windows("p");
  EXPECT_EQ(w[1].requests, 2);
  EXPECT_EQ(w[1].cold_starts, 1);
  EXPECT_EQ(w[1].p90_s, 3.0);
  EXPECT_EQ(w[1].mean_response_s, 2.0);
}

TEST(Monitor, LateRecordsDropped) {
  Monitor m(10.0, 100.0, {"p"});
  m.record(done("p", 95.0, 100.5));
  EXPECT_EQ(m.dropped(), 1u);
  EXPECT_TRUE(m.records().empty());
}

TEST(Monitor, NoTrafficGivesNullP90) {
  Monitor m(10.0, 100.0, {"p"});
  for (const auto& w : m.windows("p")) {
    EXPECT_EQ(w.requests, 0);
    EXPECT_FALSE(w.p90_s.has_value());
  }
  EXPECT_NE(metrics_csv(m.windows("p")).find("p,0,0,10,0,0,0,0,,,"), std::string::npos);
}

TEST(Monitor, InfraMeanOverNodes) {
  // The runner fills cpu_util with the node mean; the aggregate series averages platforms.
  Monitor m(10.0, 20.0, {"a", "b"});
  InfraSample s1, s2;
  s1.cpu_util = 0.2;
  s2.cpu_util = 0.6;
  m.sample("a", 0, s1);
  m.sample("b", 0, s2);
  EXPECT_NEAR(m.windows(kAllSeries)[0].infra.cpu_util, 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(m.windows("a")[0].infra.cpu_util, 0.2);
}

TEST(Monitor, SummaryMatchesWindows) {
  Monitor m(10.0, 100.0, {"a", "b"});
  for (int i = 0; i < 50; ++i) m.record(done(i % 2 ? "a" : "b", i, i + 0.5 + (i % 7) * 0.1, i < 3));
  std::int64_t total = 0, cold = 0;
  for (const auto& w : m.windows(kAllSeries)) {
    total += w.requests;
    cold += w.cold_starts;
  }
  const auto s = m.summarize(kAllSeries);
  EXPECT_EQ(s.requests, total);
  EXPECT_EQ(s.cold_starts, cold);
  EXPECT_EQ(m.summarize("a").requests + m.summarize("b").requests, s.requests);
}

TEST(Monitor, CsvHeaderOrder) {
  Monitor m(10.0, 10.0, {"p"});
  const std::string csv = metrics_csv(m.windows("p"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "series,window,t_start_s,t_end_s,requests,rejected,failed,cold_starts,p90_s,mean_response_s,"
            "exec_p90_s,cpu_util,mem_util_frac,memory_mib,replicas,disk_io_bytes,energy_j");
}
