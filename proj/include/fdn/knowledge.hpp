#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdn/model.hpp"

namespace fdn {

enum class KnowledgeKind { decision, model_snapshot, metric_series, benchmark_result };

const char* knowledge_kind_name(KnowledgeKind k);
/// File stem of the kind: decisions, models, metrics, benchmarks.
const char* knowledge_file_stem(KnowledgeKind k);

struct KnowledgeRecord {
  std::string run_id;
  KnowledgeKind kind = KnowledgeKind::decision;
  int window_index = 0;
  std::uint64_t sequence = 0;
  /// A JSON document.
  std::string payload;
};

/// Append-only store of run history.
///
/// On disk every run is a directory runs/<run_id>/ holding one
/// newline-delimited JSON file per kind. A store constructed without a root
/// keeps records in memory only.
class KnowledgeStore {
 public:
  KnowledgeStore() = default;
  explicit KnowledgeStore(std::filesystem::path root) : root_(std::move(root)) {}
  KnowledgeStore(const KnowledgeStore&) = delete;
  KnowledgeStore& operator=(const KnowledgeStore&) = delete;
  ~KnowledgeStore();

  /// Starts a fresh run; existing files of the same run id are replaced.
  void open(const std::string& run_id);
  /// Throws KnowledgeError when no run is open.
  void append(KnowledgeKind kind, int window_index, std::string payload);
  void close();
  bool is_open() const { return open_; }
  const std::string& run_id() const { return run_id_; }

  /// Records of a run in insertion order, optionally filtered by kind.
  std::vector<KnowledgeRecord> query(const std::string& run_id,
                                     std::optional<KnowledgeKind> kind = std::nullopt) const;
  /// Run ids found on disk (or in memory), sorted.
  std::vector<std::string> runs() const;

 private:
  std::filesystem::path root_;
  std::string run_id_;
  bool open_ = false;
  std::uint64_t sequence_ = 0;
  std::map<KnowledgeKind, std::ofstream> files_;
  std::map<std::string, std::vector<KnowledgeRecord>> memory_;
};

/// Reads runs/<run_id>/*.ndjson under `root` without opening a store for writing.
std::vector<KnowledgeRecord> load_run(const std::filesystem::path& root, const std::string& run_id);

struct FunctionAnnotation {
  std::string preferred_platform;
  int prewarm_count = 0;
  std::map<std::string, std::string> data_home;

  bool operator==(const FunctionAnnotation&) const = default;
};

struct AnnotatedDeployment {
  std::vector<std::string> functions;
  std::vector<std::string> platforms;
  std::map<std::string, FunctionAnnotation> annotations;
  std::vector<std::string> warnings;

  bool operator==(const AnnotatedDeployment&) const = default;
};

/// Derives deployment hints from one run's history.
///
/// preferred_platform: among platforms whose historical P90 met the SLO, the
/// one with the lowest energy per request (lowest P90 when energy is unknown);
/// when none met it, the lowest P90. prewarm_count: replicas the final
/// forecast demands. data_home: where each object lived at the end of the run.
AnnotatedDeployment annotate(const std::vector<std::string>& functions, const std::vector<std::string>& platforms,
                             const std::vector<KnowledgeRecord>& history, const SloSpec& slo);

std::string annotated_to_json(const AnnotatedDeployment& a);
AnnotatedDeployment parse_annotated(const std::string& document);

}  // namespace fdn
