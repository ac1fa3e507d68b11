// fdn-inspector: runs simulated FaaS load tests and compares their reports.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fdn/catalog.hpp"
#include "fdn/errors.hpp"
#include "fdn/knowledge.hpp"
#include "fdn/report.hpp"
#include "fdn/runner.hpp"
#include "fdn/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInvariant = 3;

struct Common {
  std::string catalog;
  std::string out;
  std::optional<std::uint64_t> seed;
};

fdn::Catalog load_catalog(const std::string& flag) {
  const std::string path = flag.empty() ? fdn::default_catalog_path() : flag;
  if (!fs::exists(path)) throw fdn::ValidationError("catalog not found: " + path);
  return fdn::parse_catalog_document(fdn::read_text_file(path));
}

fdn::ScenarioConfig load_scenario(const std::string& path, const std::optional<std::uint64_t>& seed) {
  if (!fs::exists(path)) throw fdn::ValidationError("scenario not found: " + path);
  fdn::ScenarioConfig s = fdn::parse_scenario(fdn::read_text_file(path));
  if (seed) s.seed = *seed;
  // Relative paths inside a scenario resolve against the scenario's directory.
  if (!s.annotations_path.empty() && fs::path(s.annotations_path).is_relative()) {
    s.annotations_path = (fs::path(path).parent_path() / s.annotations_path).string();
  }
  return s;
}

void print_summary(const fdn::RunResult& r, const std::string& out) {
  std::cout << "run " << r.run_id << " policy " << r.policy << " -> " << (out.empty() ? "(memory)" : out) << "\n";
  for (const auto& s : r.summary) {
    std::cout << "  " << s.series << ": requests " << s.requests << ", p90 "
              << (s.p90_s ? std::to_string(*s.p90_s) + " s" : std::string("null")) << ", cold starts "
              << s.cold_starts << ", energy "
              << (s.energy_j ? std::to_string(*s.energy_j) + " J" : std::string("unavailable")) << ", rejected "
              << s.rejected << ", failed " << s.failed << "\n";
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

fs::path relative_to(const std::string& scenario_path, const std::string& p) {
  fs::path out(p);
  return out.is_relative() ? fs::path(scenario_path).parent_path() / out : out;
}

fdn::RunResult run_one(const std::string& scenario_path, const Common& c, const std::string& out, bool trace,
                       const std::string& annotations) {
  fdn::ScenarioConfig s = load_scenario(scenario_path, c.seed);
  std::string catalog_path = c.catalog;
  if (catalog_path.empty() && !s.catalog_path.empty()) catalog_path = relative_to(scenario_path, s.catalog_path).string();
  fdn::Catalog catalog = load_catalog(catalog_path);
  if (!s.functions_path.empty()) {
    const std::string fp = relative_to(scenario_path, s.functions_path).string();
    if (!fs::exists(fp)) throw fdn::ValidationError("functions file not found: " + fp);
    // Definitions in the functions file replace catalog entries of the same name.
    for (auto& f : fdn::parse_functions(fdn::read_text_file(fp))) {
      std::erase_if(catalog.functions, [&](const fdn::FunctionSpec& g) { return g.name == f.name; });
      catalog.functions.push_back(std::move(f));
    }
  }
  fdn::RunOptions opts;
  opts.out_dir = out;
  opts.trace = trace;
  opts.annotations_path = annotations;
  return fdn::run_scenario(s, catalog, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated function delivery network: run scenarios, compare reports, annotate deployments"};
  app.require_subcommand(1);
  Common common;

  auto* run = app.add_subcommand("run", "Run one scenario");
  std::string scenario;
  bool trace = false;
  std::string annotations;
  run->add_option("scenario", scenario, "Scenario JSON")->required();
  run->add_option("--catalog", common.catalog, "Platform catalog (default: $FDN_CATALOG or bundled)");
  run->add_option("--out", common.out, "Output directory")->required();
  run->add_option("--seed", common.seed, "Override the scenario seed");
  run->add_flag("--trace", trace, "Write trace.tsv with every simulation event");
  run->add_option("--annotations", annotations, "Annotated deployment to apply");

  auto* compare = app.add_subcommand("compare", "Compare completed runs");
  std::vector<std::string> run_dirs;
  std::string metric = "requests";
  std::string compare_out;
  compare->add_option("runs", run_dirs, "Run output directories")->required()->expected(2, -1);
  compare->add_option("--metric", metric, "Metric column")->check(CLI::IsMember(fdn::comparable_metrics()));
  compare->add_option("--out", compare_out, "Write the aligned plot-ready CSV here");

  auto* list = app.add_subcommand("list-policies", "List scheduling policies and their parameters");

  auto* suite = app.add_subcommand("suite", "Run every scenario of a directory");
  std::string suite_dir = FDN_SCENARIO_DIR;
  suite->add_option("--dir", suite_dir, "Scenario directory");
  suite->add_option("--catalog", common.catalog, "Platform catalog");
  suite->add_option("--out", common.out, "Output root; one subdirectory per scenario")->required();
  suite->add_option("--seed", common.seed, "Override every scenario seed");

  auto* annotate = app.add_subcommand("annotate", "Annotate a deployment from a run's knowledge base");
  std::string history, run_id, ann_scenario, ann_out;
  annotate->add_option("--history", history, "Knowledge directory (<run-out>/knowledge)")->required();
  annotate->add_option("--run", run_id, "Run id (default: the only or last run)");
  annotate->add_option("--scenario", ann_scenario, "Scenario whose functions and platforms to annotate")->required();
  annotate->add_option("--out", ann_out, "Write the annotated deployment here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) {
      const auto r = run_one(scenario, common, common.out, trace, annotations);
      print_summary(r, common.out);
    } else if (*compare) {
      std::vector<fs::path> dirs(run_dirs.begin(), run_dirs.end());
      const auto c = fdn::compare_runs(dirs, metric);
      std::cout << c.table;
      if (!compare_out.empty()) {
        std::ofstream(compare_out, std::ios::trunc) << c.csv;
      } else {
        std::cout << "\n" << c.csv;
      }
    } else if (*list) {
      std::cout << fdn::list_policies_text();
    } else if (*suite) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(suite_dir)) {
        if (e.path().extension() == ".json") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        const std::string out = (fs::path(common.out) / f.stem()).string();
        const auto r = run_one(f.string(), common, out, false, "");
        print_summary(r, out);
      }
    } else if (*annotate) {
      const fdn::ScenarioConfig s = load_scenario(ann_scenario, std::nullopt);
      fdn::KnowledgeStore store{fs::path(history)};
      const auto runs = store.runs();
      if (run_id.empty() && !runs.empty()) run_id = runs.back();
      const auto records = run_id.empty() ? std::vector<fdn::KnowledgeRecord>{} : store.query(run_id);
      fdn::SloSpec slo;
      if (const auto* ea = std::get_if<fdn::EnergyAware>(&s.policy)) slo = ea->slo;
      else if (s.local_slo) slo = *s.local_slo;
      const auto a = fdn::annotate(s.function_names(), s.platform_ids, records, slo);
      for (const auto& w : a.warnings) std::cerr << "warning: " << w << "\n";
      const std::string doc = fdn::annotated_to_json(a);
      if (ann_out.empty()) {
        std::cout << doc;
      } else {
        std::ofstream(ann_out, std::ios::trunc) << doc;
      }
    }
  } catch (const fdn::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fdn::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
