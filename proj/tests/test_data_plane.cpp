#include <gtest/gtest.h>

#include "fdn/data_plane.hpp"
#include "fdn/errors.hpp"
#include "support.hpp"

using namespace fdn;

namespace {

constexpr std::int64_t kMiB = 1024 * 1024;

ObjectStoreSpec store(std::string id, std::string host, std::vector<std::string> objects,
                      std::map<std::string, double> latency, double fallback) {
  ObjectStoreSpec s;
  s.store_id = std::move(id);
  s.host = std::move(host);
  s.objects = std::move(objects);
  s.access_latency_s = std::move(latency);
  s.default_latency_s = fallback;
  return s;
}

FunctionSpec reader(std::string name, std::string object, std::int64_t bytes, int reads = 1, int writes = 0) {
  FunctionSpec f = fixture::function(std::move(name), {{"cloud", 1.0}});
  f.profile.data_objects.push_back(DataObjectRef{std::move(object), bytes, reads, writes});
  return f;
}

// Local store on "cloud" (0.2 s), remote store elsewhere (0.3 s from cloud).
DataPlaneConfig two_stores(std::int64_t cache_mib, std::vector<std::string> local_objects,
                           std::vector<std::string> remote_objects) {
  DataPlaneConfig c;
  c.stores.push_back(store("local", "cloud", std::move(local_objects), {{"cloud", 0.2}}, 1.0));
  c.stores.push_back(store("far", "remote", std::move(remote_objects), {{"cloud", 0.3}}, 0.3));
  c.cache_capacity_mib = cache_mib;
  c.bandwidth_mib_s = 10.0;
  c.default_local_latency_s = 0.005;
  return c;
}

}  // namespace

TEST(DataPlane, LocalCheaperThanRemote) {
  Simulator sim;
  const auto f = reader("f", "img", kMiB);
  DataPlane local(sim, two_stores(0, {"img"}, {}), {f});
  DataPlane remote(sim, two_stores(0, {}, {"img"}), {f});
  EXPECT_LT(local.access("f", "img", "cloud", AccessKind::read), remote.access("f", "img", "cloud", AccessKind::read));
}

TEST(DataPlane, SecondReadHitsCache) {
  Simulator sim;
  DataPlane dp(sim, two_stores(256, {}, {"img"}), {reader("f", "img", kMiB)});
  EXPECT_DOUBLE_EQ(dp.access("f", "img", "cloud", AccessKind::read), 0.3);
  EXPECT_DOUBLE_EQ(dp.access("f", "img", "cloud", AccessKind::read), 0.2);
  ASSERT_EQ(dp.log().size(), 2u);
  EXPECT_FALSE(dp.log()[0].hit);
  EXPECT_TRUE(dp.log()[1].hit);
}

TEST(DataPlane, WriteInvalidatesOtherCopies) {
  Simulator sim;
  DataPlaneConfig c = two_stores(256, {}, {"img"});
  c.stores[1].access_latency_s["edge"] = 0.4;
  DataPlane dp(sim, c, {reader("f", "img", kMiB)});
  dp.access("f", "img", "edge", AccessKind::read);
  dp.access("f", "img", "cloud", AccessKind::write);
  dp.access("f", "img", "edge", AccessKind::read);
  EXPECT_FALSE(dp.log().back().hit);
}

TEST(DataPlane, UnknownObject) {
  Simulator sim;
  DataPlane dp(sim, two_stores(0, {"img"}, {}), {});
  EXPECT_THROW(dp.access("f", "nope", "cloud", AccessKind::read), ValidationError);
  EXPECT_THROW(DataPlane(sim, two_stores(0, {}, {}), {reader("f", "img", 1)}), ValidationError);
}

TEST(DataPlane, LruNeverExceedsCapacity) {
  ObjectCache c(10);
  c.insert("a", 4);
  c.insert("b", 4);
  c.touch("a");
  c.insert("c", 4);  // evicts b, the least recently used
  EXPECT_TRUE(c.contains("a"));
  EXPECT_FALSE(c.contains("b"));
  EXPECT_TRUE(c.contains("c"));
  EXPECT_LE(c.used_bytes(), c.capacity_bytes());
  EXPECT_FALSE(c.insert("huge", 11));
}

TEST(DataPlane, MigratesAfterTwelveRemoteReads) {
  Simulator sim;
  DataPlane dp(sim, two_stores(0, {}, {"img"}), {reader("f", "img", kMiB)});
  for (int i = 0; i < 12; ++i) dp.access("f", "img", "cloud", AccessKind::read);
  dp.end_window();
  ASSERT_TRUE(dp.should_migrate("img").has_value());
  EXPECT_EQ(*dp.should_migrate("img"), "cloud");
}

TEST(DataPlane, NineReadsBelowThreshold) {
  Simulator sim;
  DataPlane dp(sim, two_stores(0, {}, {"img"}), {reader("f", "img", kMiB)});
  for (int i = 0; i < 9; ++i) dp.access("f", "img", "cloud", AccessKind::read);
  dp.end_window();
  EXPECT_FALSE(dp.should_migrate("img").has_value());
}

TEST(DataPlane, AlreadyLocalNeverMigrates) {
  Simulator sim;
  DataPlane dp(sim, two_stores(0, {"img"}, {}), {reader("f", "img", kMiB)});
  for (int i = 0; i < 50; ++i) dp.access("f", "img", "cloud", AccessKind::read);
  dp.end_window();
  EXPECT_FALSE(dp.should_migrate("img").has_value());
  EXPECT_EQ(dp.migrate("img", "cloud"), MigrationStart::noop);
}

TEST(DataPlane, TransferDelayAndNewHome) {
  Simulator sim;
  DataPlane dp(sim, two_stores(0, {}, {"img"}), {reader("f", "img", 10 * kMiB)});
  EXPECT_DOUBLE_EQ(dp.transfer_delay_s(10 * kMiB), 1.0);
  EXPECT_EQ(dp.migrate("img", "cloud"), MigrationStart::started);
  EXPECT_EQ(dp.migrate("img", "cloud"), MigrationStart::rejected);
  sim.run_until(0.5);
  EXPECT_DOUBLE_EQ(dp.access("f", "img", "cloud", AccessKind::read), 0.3) << "old owner during transfer";
  sim.run_until(1.0);
  EXPECT_EQ(dp.owner_host("img"), "cloud");
  EXPECT_DOUBLE_EQ(dp.access("f", "img", "cloud", AccessKind::read), dp.local_latency("cloud"));
}

TEST(DataPlane, StagingMakesBatchLocal) {
  Simulator sim;
  const auto f = reader("f", "img", 2 * kMiB);
  DataPlane dp(sim, two_stores(256, {}, {"img"}), {f});
  const double delay = dp.stage_files(f, "cloud");
  EXPECT_DOUBLE_EQ(delay, 0.2);
  for (int i = 0; i < 5; ++i) dp.access_all(f, "cloud");
  for (const auto& a : dp.log()) EXPECT_TRUE(a.hit);
}

TEST(DataPlane, StagingBeatsRepeatedTransfers) {
  // One bulk copy costs size/bandwidth once; N misses pay the remote latency N times.
  Simulator sim;
  const auto f = reader("f", "img", 2 * kMiB);
  DataPlane staged(sim, two_stores(256, {}, {"img"}), {f});
  DataPlane uncached(sim, two_stores(0, {}, {"img"}), {f});
  const int n = 4;
  double staged_total = staged.stage_files(f, "cloud"), plain_total = 0.0;
  for (int i = 0; i < n; ++i) {
    staged_total += staged.access_all(f, "cloud");
    plain_total += uncached.access_all(f, "cloud");
  }
  EXPECT_LT(staged_total, plain_total);
}

TEST(DataPlane, StagingNothingIsFree) {
  Simulator sim;
  DataPlane dp(sim, two_stores(256, {"img"}, {}), {});
  EXPECT_DOUBLE_EQ(dp.stage_files(fixture::function("g", {{"cloud", 1.0}}), "cloud"), 0.0);
}

TEST(DataPlane, StagingNeedsCacheRoom) {
  Simulator sim;
  const auto f = reader("f", "img", 2 * kMiB);
  DataPlane dp(sim, two_stores(1, {}, {"img"}), {f});
  EXPECT_THROW(dp.stage_files(f, "cloud"), ValidationError);
}
