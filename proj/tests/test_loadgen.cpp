#include <gtest/gtest.h>

#include "fdn/errors.hpp"
#include "fdn/loadgen.hpp"
#include "support.hpp"

using namespace fdn;
using fdn::fixture::instance;

namespace {

// Answers every request after a fixed service time.
struct Echo {
  Simulator sim;
  std::unique_ptr<LoadGenerator> gen;
  std::size_t peak = 0;
  std::vector<double> issued_at;

  Echo(std::vector<TestInstance> instances, double service_s, bool ok = true) {
    gen = std::make_unique<LoadGenerator>(sim, instances, [this, service_s, ok](std::size_t vu, const std::string&,
                                                                                const std::string&) {
      issued_at.push_back(sim.now());
      peak = std::max(peak, gen->outstanding());
      sim.schedule_in(service_s, "done", [this, vu, ok] { gen->complete(vu, ok); });
    });
    gen->start();
  }
};

}  // namespace

TEST(LoadGen, ClosedLoopCount) {
  // Each cycle is 1 s service plus 1 s sleep, so 10 s holds 5 requests.
  Echo e({instance("f", 1, 10.0, 1.0)}, 1.0);
  e.sim.run_until(100.0);
  EXPECT_EQ(e.gen->issued(), 5u);
  EXPECT_EQ(e.issued_at, (std::vector<double>{0.0, 2.0, 4.0, 6.0, 8.0}));
}

TEST(LoadGen, ZeroDurationIssuesNothing) {
  Echo e({instance("f", 3, 0.0)}, 1.0);
  e.sim.run_until(10.0);
  EXPECT_EQ(e.gen->issued(), 0u);
}

TEST(LoadGen, OutstandingNeverExceedsVus) {
  Echo e({instance("f", 7, 60.0), instance("g", 3, 60.0, 0.5)}, 2.5);
  e.sim.run_until(200.0);
  EXPECT_LE(e.peak, 10u);
  EXPECT_EQ(e.gen->outstanding(), 0u);
}

TEST(LoadGen, StaggeredStart) {
  Echo e({instance("f", 3, 10.0)}, 100.0);
  e.sim.run_until(1.0);
  EXPECT_EQ(e.issued_at, (std::vector<double>{0.0, 0.001, 0.002}));
}

TEST(LoadGen, FailedRequestPausesOneSecond) {
  Echo e({instance("f", 1, 5.0)}, 0.0, false);
  e.sim.run_until(100.0);
  EXPECT_EQ(e.gen->issued(), 5u);
}

TEST(LoadGen, RejectsZeroVus) {
  Simulator sim;
  EXPECT_THROW(LoadGenerator(sim, {instance("f", 0, 10.0)}, nullptr), ValidationError);
}
