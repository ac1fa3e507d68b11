#include <gtest/gtest.h>

#include <cmath>

#include "fdn/behavior.hpp"
#include "fdn/errors.hpp"

using namespace fdn;

TEST(PerfModel, ConstantSeriesIsFixedPoint) {
  PerfModel m;
  for (int i = 0; i < 20; ++i) m.update("f", "p", 2.0, std::nullopt);
  EXPECT_DOUBLE_EQ(*m.exec_s("f", "p"), 2.0);
}

TEST(PerfModel, FirstSampleInitializes) {
  PerfModel m;
  m.update("f", "p", 4.0, 1.5);
  EXPECT_DOUBLE_EQ(*m.exec_s("f", "p"), 4.0);
  EXPECT_DOUBLE_EQ(*m.energy_j("f", "p"), 1.5);
  EXPECT_EQ(m.find("f", "p")->samples, 1);
}

TEST(PerfModel, HalfAlpha) {
  PerfModel m(0.5);
  m.update("f", "p", 1.0, std::nullopt);
  m.update("f", "p", 3.0, std::nullopt);
  EXPECT_DOUBLE_EQ(*m.exec_s("f", "p"), 0.5 * 3.0 + 0.5 * 1.0);
}

TEST(PerfModel, DefaultAlpha) { EXPECT_DOUBLE_EQ(PerfModel().alpha(), 0.2); }

TEST(PerfModel, RejectsNonPositive) {
  PerfModel m;
  EXPECT_THROW(m.update("f", "p", 0.0, std::nullopt), ValidationError);
  EXPECT_THROW(m.update("f", "p", -1.0, std::nullopt), ValidationError);
  EXPECT_THROW(PerfModel(0.0), ValidationError);
  EXPECT_THROW(PerfModel(1.5), ValidationError);
}

TEST(PerfModel, PriorUntilFirstSample) {
  PerfModel m;
  EXPECT_FALSE(m.exec_s("f", "p").has_value());
  m.set_prior("f", "p", 0.7, std::nullopt);
  EXPECT_DOUBLE_EQ(*m.exec_s("f", "p"), 0.7);
  m.update("f", "p", 1.0, std::nullopt);
  EXPECT_DOUBLE_EQ(*m.exec_s("f", "p"), 1.0);
}

TEST(Predict, IdleLimitIsExec) { EXPECT_DOUBLE_EQ(predict_p90(1.3, 0.0, 16, true, 5.0), 1.3); }

TEST(Predict, SaturationFactor) {
  // capacity 16, exec 1 s, 32/s offered -> demand 32 replicas, factor 2.
  EXPECT_DOUBLE_EQ(predict_p90(1.0, 32.0, 16, true, 5.0), 2.0);
}

TEST(Predict, ColdSurcharge) { EXPECT_DOUBLE_EQ(predict_p90(1.0, 0.0, 16, false, 5.0), 6.0); }

TEST(Predict, ZeroCapacitySaturates) {
  EXPECT_TRUE(std::isinf(predict_p90(1.0, 1.0, 0, true, 0.0)));
  EXPECT_DOUBLE_EQ(predict_p90(1.0, 0.0, 0, true, 0.0), 1.0);
}

TEST(Predict, DoublingRateNeverLowers) {
  double prev = predict_p90(0.8, 0.01, 10, true, 0.0);
  for (double r = 0.02; r < 1000.0; r *= 2.0) {
    const double cur = predict_p90(0.8, r, 10, true, 0.0);
    EXPECT_GE(cur, prev);
    prev = cur;
  }
}

TEST(Hints, SteadyDemandCovered) { EXPECT_EQ(prewarm_hint(10.0, 0.5, 5), 0); }

TEST(Hints, NeverNegative) { EXPECT_EQ(prewarm_hint(1.0, 0.5, 40), 0); }

TEST(Hints, NoHistoryNoForecast) {
  EventModel m;
  m.count("f", "p");
  m.end_window(10.0);
  m.end_window(10.0);
  EXPECT_FALSE(m.forecast("f", "p").has_value());
}

TEST(Hints, RampProducesPositiveHint) {
  // Rates 0, 0, 10, 20, 20 per second: the mean of the last three windows is 50/3.
  EventModel m;
  const int per_window[] = {0, 0, 100, 200, 200};
  for (int n : per_window) {
    for (int i = 0; i < n; ++i) m.count("f", "p");
    m.end_window(10.0);
  }
  const double expected = (10.0 + 20.0 + 20.0) / 3.0;
  ASSERT_TRUE(m.forecast("f", "p").has_value());
  EXPECT_DOUBLE_EQ(*m.forecast("f", "p"), expected);
  EXPECT_EQ(prewarm_hint(*m.forecast("f", "p"), 0.5, 2), static_cast<int>(std::ceil(expected * 0.5)) - 2);
  EXPECT_GT(prewarm_hint(*m.forecast("f", "p"), 0.5, 2), 0);
}

TEST(Hints, LateKeyBackfillsZeros) {
  EventModel m;
  m.end_window(10.0);
  m.count("f", "p");
  m.end_window(10.0);
  EXPECT_EQ(m.rates("f", "p"), (std::vector<double>{0.0, 0.1}));
}

TEST(Interaction, ThresholdCrossing) {
  InteractionModel g(100);
  bool crossed = false;
  for (int i = 0; i < 100; ++i) crossed |= g.record("A", "B");
  EXPECT_FALSE(crossed);
  EXPECT_TRUE(g.record("A", "B"));
  ASSERT_EQ(g.recommendations().size(), 1u);
  EXPECT_EQ(g.recommendations()[0], std::make_pair(std::string("A"), std::string("B")));
  EXPECT_FALSE(g.record("A", "B"));
}

TEST(Interaction, EmptyGraph) {
  InteractionModel g;
  EXPECT_TRUE(g.edges().empty());
  EXPECT_EQ(g.weight("A", "B"), 0);
}

TEST(Interaction, WeightsAddAcrossWindows) {
  InteractionModel g;
  const int windows[] = {3, 0, 7, 5};
  int total = 0;
  for (int n : windows) {
    for (int i = 0; i < n; ++i) g.record("P", "C");
    total += n;
  }
  EXPECT_EQ(g.weight("P", "C"), total);
}

TEST(DataAccess, CountersPerWindowAndTotal) {
  DataAccessModel m;
  m.record("f", "o", "p", false);
  m.record("f", "o", "p", true);
  m.end_window();
  m.record("f", "o", "p", false);
  m.end_window();
  EXPECT_EQ(m.total("f", "o", "p").reads, 2);
  EXPECT_EQ(m.total("f", "o", "p").writes, 1);
  ASSERT_EQ(m.history().size(), 2u);
  EXPECT_EQ(m.history()[1].at({"f", "o", "p"}).reads, 1);
}
