#include <gtest/gtest.h>

#include <map>
#include <memory>

#include "fdn/control_plane.hpp"
#include "fdn/errors.hpp"
#include "support.hpp"

using namespace fdn;
using fdn::fixture::function;
using fdn::fixture::platform;

namespace {

// A handful of platforms that all host "f", plus a scheduler over them.
struct Fleet {
  Simulator sim;
  std::vector<std::unique_ptr<PlatformSim>> owned;
  std::vector<PlatformSim*> raw;

  explicit Fleet(const std::vector<std::string>& ids, int nodes = 1, std::int64_t mem = 4096) {
    std::map<std::string, double> base;
    for (const auto& id : ids) base[id] = 1.0;
    for (const auto& id : ids) {
      owned.push_back(std::make_unique<PlatformSim>(sim, platform(id, nodes, 4, mem, 0.0),
                                                    std::vector<FunctionSpec>{function("f", base)}, nullptr, 1,
                                                    PlatformSim::Hooks{}));
      owned.back()->deploy();
      raw.push_back(owned.back().get());
    }
  }

  PlatformSim& get(const std::string& id) {
    for (auto* p : raw) {
      if (p->id() == id) return *p;
    }
    throw std::out_of_range(id);
  }
};

std::map<std::string, int> tally(Scheduler& s, int n, const std::string& fn = "f") {
  std::map<std::string, int> out;
  for (int i = 0; i < n; ++i) ++out[s.schedule("r" + std::to_string(i), fn, 0.0)->platform_id];
  return out;
}

}  // namespace

TEST(Auth, TokenStub) {
  AccessControlSettings a;
  EXPECT_TRUE(authenticate(a, ""));
  a.secret = "s3cret";
  EXPECT_TRUE(authenticate(a, "s3cret"));
  EXPECT_FALSE(authenticate(a, ""));
  EXPECT_FALSE(authenticate(a, "guess"));
}

TEST(Rank, ByThroughput) {
  const std::map<std::string, double> t{{"hpc", 500}, {"google", 450}, {"old-hpc", 400}, {"cloud", 200}};
  EXPECT_EQ(rank_platforms(t, {"cloud", "old-hpc", "hpc", "google"}),
            (std::vector<std::string>{"hpc", "google", "old-hpc", "cloud"}));
}

TEST(Rank, SingleAndTies) {
  EXPECT_EQ(rank_platforms({{"a", 1.0}}, {"a"}), std::vector<std::string>{"a"});
  EXPECT_EQ(rank_platforms({{"zeta", 3.0}, {"alpha", 3.0}}, {"zeta", "alpha"}),
            (std::vector<std::string>{"alpha", "zeta"}));
}

TEST(Rank, MissingResult) { EXPECT_THROW(rank_platforms({{"a", 1.0}}, {"a", "b"}), ValidationError); }

TEST(Scheduler, RankedBestTakesTop) {
  Fleet fleet({"a", "b"});
  Scheduler s(RankedBest{}, fleet.raw, {"b", "a"});
  EXPECT_EQ(tally(s, 10), (std::map<std::string, int>{{"b", 10}}));
}

TEST(Scheduler, WeightedFiveToOne) {
  Fleet fleet({"old-hpc", "cloud"});
  Scheduler s(WeightedCollab{{{"old-hpc", 5}, {"cloud", 1}}}, fleet.raw, {"old-hpc", "cloud"});
  EXPECT_EQ(tally(s, 6), (std::map<std::string, int>{{"old-hpc", 5}, {"cloud", 1}}));
}

TEST(Scheduler, RoundRobinCycles) {
  Fleet fleet({"a", "b", "c"});
  Scheduler s(RoundRobinCollab{{"c", "a", "b"}}, fleet.raw, {"a", "b", "c"});
  std::vector<std::string> picks;
  for (int i = 0; i < 6; ++i) picks.push_back(s.schedule("r", "f", 0.0)->platform_id);
  EXPECT_EQ(picks, (std::vector<std::string>{"c", "a", "b", "c", "a", "b"}));
}

TEST(Scheduler, UtilizationAwareAvoidsFullMemory) {
  Fleet fleet({"top", "spare"});
  fleet.get("top").set_background_load(0.0, 1.0);
  Scheduler s(UtilizationAware{}, fleet.raw, {"top", "spare"});
  const auto d = s.schedule("r", "f", 0.0);
  EXPECT_EQ(d->platform_id, "spare");
  EXPECT_FALSE(d->degraded);
}

TEST(Scheduler, UtilizationAwareAvoidsHotCpu) {
  Fleet fleet({"top", "spare"});
  fleet.get("top").set_background_load(0.95, 0.0);
  Scheduler s(UtilizationAware{0.9}, fleet.raw, {"top", "spare"});
  EXPECT_EQ(s.schedule("r", "f", 0.0)->platform_id, "spare");
}

TEST(Scheduler, UtilizationAwareDegradesWhenAllExcluded) {
  Fleet fleet({"top", "spare"});
  fleet.get("top").set_background_load(0.0, 1.0);
  fleet.get("spare").set_background_load(0.0, 1.0);
  Scheduler s(UtilizationAware{}, fleet.raw, {"top", "spare"});
  const auto d = s.schedule("r", "f", 0.0);
  EXPECT_EQ(d->platform_id, "top");
  EXPECT_TRUE(d->degraded);
}

TEST(Scheduler, EnergyAwareSloSeven) {
  Fleet fleet({"edge", "hpc"});
  auto predictor = [](const std::string&, const std::string& pid) {
    return pid == "edge" ? Prediction{6.32, 2.0} : Prediction{2.3, 40.0};
  };
  Scheduler s7(EnergyAware{SloSpec{7.0}}, fleet.raw, {"hpc", "edge"}, nullptr, predictor);
  EXPECT_EQ(s7.schedule("r", "f", 0.0)->platform_id, "edge");
  Scheduler s3(EnergyAware{SloSpec{3.0}}, fleet.raw, {"hpc", "edge"}, nullptr, predictor);
  EXPECT_EQ(s3.schedule("r", "f", 0.0)->platform_id, "hpc");
}

TEST(Scheduler, EnergyAwareFallsBackToFastest) {
  Fleet fleet({"edge", "hpc"});
  auto predictor = [](const std::string&, const std::string& pid) {
    return pid == "edge" ? Prediction{6.32, 2.0} : Prediction{2.3, 40.0};
  };
  Scheduler s(EnergyAware{SloSpec{1.0}}, fleet.raw, {"edge", "hpc"}, nullptr, predictor);
  const auto d = s.schedule("r", "f", 0.0);
  EXPECT_EQ(d->platform_id, "hpc");
  EXPECT_TRUE(d->degraded);
}

TEST(Scheduler, EnergyAwareSkipsUnknownEnergy) {
  Fleet fleet({"gcf", "edge"});
  auto predictor = [](const std::string&, const std::string& pid) {
    return pid == "gcf" ? Prediction{0.5, std::nullopt} : Prediction{5.0, 3.0};
  };
  Scheduler s(EnergyAware{SloSpec{7.0}}, fleet.raw, {"gcf", "edge"}, nullptr, predictor);
  EXPECT_EQ(s.schedule("r", "f", 0.0)->platform_id, "edge");
}

TEST(Scheduler, DataLocalityPrefersNearStore) {
  Fleet fleet({"cloud", "gcp"});
  DataPlaneConfig c;
  ObjectStoreSpec st;
  st.store_id = "minio";
  st.host = "gcp";
  st.objects = {"img"};
  st.access_latency_s = {{"gcp", 0.05}, {"cloud", 1.0}};
  c.stores.push_back(st);
  FunctionSpec f = function("f", {{"cloud", 1.0}, {"gcp", 1.0}});
  f.profile.data_objects.push_back(DataObjectRef{"img", 1024, 1, 0});
  DataPlane dp(fleet.sim, c, {f});
  // The fleet's copy of "f" has no data objects; schedule a data-bound twin instead.
  std::vector<std::unique_ptr<PlatformSim>> owned;
  std::vector<PlatformSim*> raw;
  for (const char* id : {"cloud", "gcp"}) {
    owned.push_back(std::make_unique<PlatformSim>(fleet.sim, platform(id, 1, 4, 4096, 0.0),
                                                  std::vector<FunctionSpec>{f}, &dp, 1, PlatformSim::Hooks{}));
    owned.back()->deploy();
    raw.push_back(owned.back().get());
  }
  Scheduler s(DataLocality{}, raw, {"cloud", "gcp"}, &dp);
  EXPECT_EQ(s.schedule("r", "f", 0.0)->platform_id, "gcp");
}

TEST(Scheduler, DataLocalityTiesFollowRank) {
  Fleet fleet({"a", "b"});
  Scheduler s(DataLocality{}, fleet.raw, {"b", "a"});
  EXPECT_EQ(s.schedule("r", "f", 0.0)->platform_id, "b");
}

TEST(Scheduler, DeployedNowhere) {
  Fleet fleet({"a"});
  Scheduler s(RankedBest{}, fleet.raw, {"a"});
  EXPECT_THROW(s.schedule("r", "ghost", 0.0), SchedulingError);
}

TEST(Failover, SurvivorTakesEverything) {
  Fleet fleet({"old-hpc", "cloud"});
  Scheduler s(WeightedCollab{{{"old-hpc", 5}, {"cloud", 1}}}, fleet.raw, {"old-hpc", "cloud"});
  s.mark_failed("old-hpc");
  EXPECT_EQ(tally(s, 12), (std::map<std::string, int>{{"cloud", 12}}));
}

TEST(Failover, AllFailedIsOutage) {
  Fleet fleet({"a", "b"});
  Scheduler s(RankedBest{}, fleet.raw, {"a", "b"});
  s.mark_failed("a");
  s.mark_failed("b");
  EXPECT_FALSE(s.schedule("r", "f", 0.0).has_value());
}

TEST(Failover, RecoveryResumesWeightedSplit) {
  Fleet fleet({"old-hpc", "cloud"});
  Scheduler s(WeightedCollab{{{"old-hpc", 5}, {"cloud", 1}}}, fleet.raw, {"old-hpc", "cloud"});
  tally(s, 3);
  s.mark_failed("old-hpc");
  tally(s, 4);
  s.mark_recovered("old-hpc");
  // The interleave restarts on the membership change, so the next block of 6 is exact.
  EXPECT_EQ(tally(s, 6), (std::map<std::string, int>{{"old-hpc", 5}, {"cloud", 1}}));
}

TEST(Wrr, RejectsZeroWeight) { EXPECT_THROW(SmoothWeightedRoundRobin({{"a", 0}}), ValidationError); }

TEST(Wrr, InterleavesNotBursts) {
  SmoothWeightedRoundRobin w({{"a", 5}, {"b", 1}});
  std::string seq;
  for (int i = 0; i < 6; ++i) seq += *w.next({"a", "b"});
  EXPECT_EQ(seq, "aaabaa");
}

TEST(DecisionLog, FieldOrder) {
  SchedulingDecision d;
  d.request_id = "r1";
  d.policy = "ranked-best";
  d.platform_id = "hpc";
  d.node_id = "hpc-node-1";
  d.rationale = "rank 1";
  d.decided_at_s = 1.5;
  EXPECT_EQ(decisions_tsv({d}), "t_ms\trequest_id\tpolicy\tplatform\tnode\trationale\n"
                                "1500\tr1\tranked-best\thpc\thpc-node-1\trank 1\n");
}
