#include <gtest/gtest.h>

#include <filesystem>

#include "fdn/errors.hpp"
#include "fdn/knowledge.hpp"

using namespace fdn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fdn-kb-" + name);
  fs::remove_all(p);
  return p;
}

KnowledgeRecord summary(const std::string& fn, const std::string& pid, double p90, std::optional<double> energy) {
  KnowledgeRecord r;
  r.kind = KnowledgeKind::metric_series;
  std::string e = energy ? std::to_string(*energy) : "null";
  r.payload = "{\"type\":\"function_summary\",\"function\":\"" + fn + "\",\"platform\":\"" + pid +
              "\",\"p90_s\":" + std::to_string(p90) + ",\"energy_per_request_j\":" + e + "}";
  return r;
}

}  // namespace

TEST(Knowledge, AppendQueryOrder) {
  KnowledgeStore kb;
  kb.open("run-a");
  kb.append(KnowledgeKind::decision, 0, "{\"n\":1}");
  kb.append(KnowledgeKind::metric_series, 0, "{\"n\":2}");
  kb.append(KnowledgeKind::decision, 1, "{\"n\":3}");
  kb.close();
  const auto all = kb.query("run-a");
  ASSERT_EQ(all.size(), 3u);
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].sequence, i);
  const auto d = kb.query("run-a", KnowledgeKind::decision);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[1].payload, "{\"n\":3}");
}

TEST(Knowledge, AppendAfterCloseFails) {
  KnowledgeStore kb;
  EXPECT_THROW(kb.append(KnowledgeKind::decision, 0, "{}"), KnowledgeError);
  kb.open("r");
  kb.close();
  EXPECT_THROW(kb.append(KnowledgeKind::decision, 0, "{}"), KnowledgeError);
}

TEST(Knowledge, BadRunId) {
  KnowledgeStore kb;
  EXPECT_THROW(kb.open(""), KnowledgeError);
  EXPECT_THROW(kb.open("a/b"), KnowledgeError);
}

TEST(Knowledge, SurvivesOnDisk) {
  const auto root = scratch("disk");
  {
    KnowledgeStore kb(root);
    kb.open("run-x");
    kb.append(KnowledgeKind::benchmark_result, -1, "{\"t\":500}");
    kb.append(KnowledgeKind::model_snapshot, 3, "{\"final\":true}");
  }
  EXPECT_TRUE(fs::exists(root / "runs" / "run-x" / "benchmarks.ndjson"));
  const auto back = load_run(root, "run-x");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].kind, KnowledgeKind::benchmark_result);
  EXPECT_EQ(back[1].window_index, 3);
  EXPECT_EQ(KnowledgeStore(root).runs(), std::vector<std::string>{"run-x"});
  fs::remove_all(root);
}

TEST(Knowledge, ReopenReplaces) {
  const auto root = scratch("reopen");
  KnowledgeStore kb(root);
  kb.open("r");
  kb.append(KnowledgeKind::decision, 0, "{}");
  kb.open("r");
  kb.close();
  EXPECT_TRUE(load_run(root, "r").empty());
  fs::remove_all(root);
}

TEST(Annotate, NoHistory) {
  const auto a = annotate({"f"}, {"edge"}, {}, SloSpec{});
  EXPECT_TRUE(a.annotations.empty());
  ASSERT_EQ(a.warnings.size(), 1u);
  EXPECT_EQ(a.functions, std::vector<std::string>{"f"});
}

TEST(Annotate, FunctionAbsentFromHistory) {
  const auto a = annotate({"f", "g"}, {"edge"}, {summary("f", "edge", 1.0, 2.0)}, SloSpec{});
  EXPECT_TRUE(a.annotations.contains("f"));
  EXPECT_FALSE(a.annotations.contains("g"));
  EXPECT_EQ(a.warnings.size(), 1u);
}

TEST(Annotate, CheapestPlatformMeetingSlo) {
  const std::vector<KnowledgeRecord> h{summary("f", "edge", 6.3, 2.0), summary("f", "hpc", 2.3, 40.0)};
  EXPECT_EQ(annotate({"f"}, {"edge", "hpc"}, h, SloSpec{7.0}).annotations.at("f").preferred_platform, "edge");
  EXPECT_EQ(annotate({"f"}, {"edge", "hpc"}, h, SloSpec{3.0}).annotations.at("f").preferred_platform, "hpc");
}

TEST(Annotate, NoneMeetsSloTakesFastest) {
  const std::vector<KnowledgeRecord> h{summary("f", "edge", 6.3, 2.0), summary("f", "hpc", 2.3, 40.0)};
  EXPECT_EQ(annotate({"f"}, {"edge", "hpc"}, h, SloSpec{1.0}).annotations.at("f").preferred_platform, "hpc");
}

TEST(Annotate, UnknownEnergyFallsToP90) {
  const std::vector<KnowledgeRecord> h{summary("f", "gcf", 1.0, std::nullopt), summary("f", "cloud", 2.0, std::nullopt)};
  EXPECT_EQ(annotate({"f"}, {"gcf", "cloud"}, h, SloSpec{7.0}).annotations.at("f").preferred_platform, "gcf");
}

TEST(Annotate, PrewarmAndDataHomeFromFinalSnapshot) {
  std::vector<KnowledgeRecord> h{summary("f", "edge", 1.0, 1.0)};
  KnowledgeRecord m;
  m.kind = KnowledgeKind::model_snapshot;
  m.payload = R"({"final":true,"prewarm_demand":[{"function":"f","platform":"edge","replicas":4}],)"
              R"("function_objects":{"f":["img"]},"data_home":{"img":"edge"}})";
  h.push_back(m);
  const auto a = annotate({"f"}, {"edge"}, h, SloSpec{});
  EXPECT_EQ(a.annotations.at("f").prewarm_count, 4);
  EXPECT_EQ(a.annotations.at("f").data_home.at("img"), "edge");
}

TEST(Annotate, JsonRoundTrip) {
  AnnotatedDeployment a;
  a.functions = {"f"};
  a.platforms = {"edge", "hpc"};
  a.annotations["f"] = FunctionAnnotation{"edge", 3, {{"img", "edge"}}};
  a.warnings = {"w"};
  EXPECT_EQ(parse_annotated(annotated_to_json(a)), a);
  EXPECT_THROW(parse_annotated(R"({"annotations":{"f":{"prewarm_count":-1}}})"), ValidationError);
}
