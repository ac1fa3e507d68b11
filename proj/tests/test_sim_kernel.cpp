#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>
#include <vector>

#include "fdn/sim_kernel.hpp"

using namespace fdn;

TEST(Simulator, NowBeforeLater) {
  Simulator sim;
  std::vector<int> order;
  sim.schedule_at(5.0, "later", [&] { order.push_back(2); });
  sim.schedule_at(0.0, "now", [&] { order.push_back(1); });
  sim.run_until(10.0);
  EXPECT_EQ(order, (std::vector<int>{1, 2}));
}

TEST(Simulator, TiesKeepInsertionOrder) {
  Simulator sim;
  std::vector<int> order;
  sim.schedule_at(2.0, "a", [&] { order.push_back(1); });
  sim.schedule_at(1.0, "b", [&] { order.push_back(0); });
  sim.schedule_at(2.0, "c", [&] { order.push_back(2); });
  EXPECT_EQ(sim.run_until(3.0), 3u);
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2}));
}

TEST(Simulator, RejectsPast) {
  Simulator sim;
  sim.run_until(5.0);
  EXPECT_THROW(sim.schedule_at(4.0, "past", [] {}), std::invalid_argument);
}

TEST(Simulator, EmptyRunAdvancesClock) {
  Simulator sim;
  EXPECT_EQ(sim.run_until(100.0), 0u);
  EXPECT_DOUBLE_EQ(sim.now(), 100.0);
}

TEST(Simulator, RunUntilNowLeavesFutureEvents) {
  Simulator sim;
  sim.run_until(1.0);
  sim.schedule_at(2.0, "future", [] {});
  EXPECT_EQ(sim.run_until(1.0), 0u);
  EXPECT_EQ(sim.pending(), 1u);
}

TEST(Simulator, CancelledEventNeverFires) {
  Simulator sim;
  bool fired = false;
  auto h = sim.schedule_at(1.0, "x", [&] { fired = true; });
  EXPECT_TRUE(sim.cancel(h));
  EXPECT_FALSE(sim.cancel(h));
  sim.run_until(2.0);
  EXPECT_FALSE(fired);
}

TEST(Simulator, QuantizesHalfUp) {
  EXPECT_EQ(to_ms(0.0005), 1);
  EXPECT_EQ(to_ms(0.0004), 0);
  EXPECT_EQ(to_ms(1.2345), 1235);
}

TEST(Simulator, TraceLines) {
  Simulator sim;
  std::ostringstream trace;
  sim.set_trace(&trace);
  sim.schedule_at(0.25, "tick", [] {});
  sim.run_until(1.0);
  EXPECT_EQ(trace.str(), "250\t1\ttick\n");
}

TEST(Rng, SameSeedSameStream) {
  RngStream a(42, "loadgen"), b(42, "loadgen");
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, SeedsAndLabelsDiffer) {
  RngStream a(42, "loadgen"), b(43, "loadgen"), c(42, "jitter");
  int same_b = 0, same_c = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_b += x == b.next_u64();
    same_c += x == c.next_u64();
  }
  EXPECT_EQ(same_b, 0);
  EXPECT_EQ(same_c, 0);
}

TEST(Rng, UniformMean) {
  RngStream r(7, "mean");
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}

// Reference values of the SplitMix64 finalizer, so the stream is portable.
TEST(Rng, SplitMixReference) {
  EXPECT_EQ(splitmix64_mix(0x9E3779B97F4A7C15ULL), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(fnv1a64(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
}
