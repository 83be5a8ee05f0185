#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "gvb/graph.hpp"
#include "gvb/layout.hpp"
#include "gvb/oracles.hpp"
#include "gvb/render.hpp"
#include "gvb/rng.hpp"

namespace gvb {

inline constexpr int kTaskCount = 7;

// ---- ground truth ---------------------------------------------------------

struct CountsTruth {
  int nodes = 0;
  int edges = 0;
  friend bool operator==(const CountsTruth&, const CountsTruth&) = default;
};
struct ClassTruth {
  GraphClass cls = GraphClass::tree;
  friend bool operator==(const ClassTruth&, const ClassTruth&) = default;
};
struct CutEdgeTruth {
  NodeId u = 0, v = 0;  // u < v
  friend bool operator==(const CutEdgeTruth&, const CutEdgeTruth&) = default;
};
struct CensusTruth {
  PatternCensus census;
  friend bool operator==(const CensusTruth&, const CensusTruth&) = default;
};
struct MissingEdgeTruth {
  NodeId u = 0, v = 0;  // u < v
  friend bool operator==(const MissingEdgeTruth&, const MissingEdgeTruth&) = default;
};
struct PathTruth {
  PathResult path;
  NodeId source = 0, target = 0;
  friend bool operator==(const PathTruth&, const PathTruth&) = default;
};
struct MatchTruth {
  bool match = false;
  friend bool operator==(const MatchTruth&, const MatchTruth&) = default;
};

/// Alternative index + 1 is the task number.
using GroundTruth = std::variant<CountsTruth, ClassTruth, CutEdgeTruth, CensusTruth,
                                 MissingEdgeTruth, PathTruth, MatchTruth>;

inline int task_of(const GroundTruth& t) { return static_cast<int>(t.index()) + 1; }

nlohmann::json to_json(const GroundTruth& t);
GroundTruth truth_from_json(const nlohmann::json& j);

// ---- instances ------------------------------------------------------------

struct TaskInstance {
  std::string instance_id;
  int task = 1;
  /// Style/structure variation; NMAE groups and report breakdowns key on it.
  std::string variant;
  /// Construction detail where a variant mixes constructions (Task 7:
  /// identical / relabeled / rewired).
  std::string detail;
  std::uint64_t seed = 0;
  Graph graph;
  Positions positions;
  StyleSpec style;
  std::optional<Graph> graph2;
  Positions positions2;
  std::optional<StyleSpec> style2;
  std::string image_path;  // relative to the output root
  std::string svg_path;
  std::string image_hash;
  GroundTruth truth;
};

nlohmann::json to_json(const TaskInstance& inst);
TaskInstance instance_from_json(const nlohmann::json& j);

// ---- configuration --------------------------------------------------------

struct Task1Config {
  int nodes = 10;
  double edge_probability = 0.2;
  std::vector<std::string> layouts{"spring", "circular",     "spectral", "random",
                                   "shell",  "kamada_kawai", "planar"};
  std::vector<bool> labels{true, false};
  std::vector<bool> directed{true, false};
  std::vector<std::string> colors{"uniform", "random"};
  double overlap_severity = 0.0;
};
struct Task2Config {
  std::vector<std::string> classes{"acyclic", "cyclic", "bipartite", "complete",
                                   "mesh",    "planar", "tree"};
  int min_nodes = 6;
  int max_nodes = 10;
  double edge_probability = 0.3;
};
struct Task3Config {
  std::vector<int> node_counts{10, 20, 30};
  double chord_probability = 0.15;
};
struct Task4Config {
  std::vector<std::string> kind_sets{"chain",      "clique",     "star",            "chain+clique",
                                     "chain+star", "clique+star", "chain+clique+star"};
  std::vector<int> totals{2, 3, 4};
  int chain_min = 3, chain_max = 5;
  int clique_min = 3, clique_max = 5;
  int star_min = 4, star_max = 6;
};
struct Task5Config {
  std::vector<int> node_counts{4, 5, 6};
};
struct Task6Config {
  std::vector<int> node_counts{5, 6, 7};
  double edge_probability = 0.3;
  int weight_min = 1;
  int weight_max = 10;
  std::string layout = "random";
  bool directed = false;
  /// -1 selects the smallest / largest node index.
  int source = -1;
  int target = -1;
};
struct Task7Config {
  std::vector<int> node_counts{4, 5, 6};
  double edge_probability = 0.4;
  /// Share of each non-matching group built by relabeling (isomorphic but
  /// not label-equal); the rest rewire one edge.
  double relabeled_fraction = 0.5;
  std::vector<std::string> layouts{"spring", "circular", "kamada_kawai", "shell"};
};

struct DatasetConfig {
  std::uint64_t seed = 20241014;
  /// Images per variation.
  int replicates = 10;
  std::vector<int> tasks{1, 2, 3, 4, 5, 6, 7};
  int max_attempts = 2000;
  Task1Config task1;
  Task2Config task2;
  Task3Config task3;
  Task4Config task4;
  Task5Config task5;
  Task6Config task6;
  Task7Config task7;
};

nlohmann::json to_json(const DatasetConfig& c);
/// Missing fields take defaults; unknown fields raise ConfigError.
DatasetConfig dataset_config_from_json(const nlohmann::json& j);
/// Throws ConfigError describing the first invalid field.
void validate(const DatasetConfig& c);

/// Instances the config yields for `task` (counts only, no generation).
int expected_count(int task, const DatasetConfig& c);

// ---- generation -----------------------------------------------------------

/// Every instance of one task, truths oracle-verified. Per-instance streams
/// are forked from `base`, so results do not depend on call order or on
/// `threads` (0 = hardware concurrency).
/// Throws GenerationError when retries run out or an oracle disagrees.
std::vector<TaskInstance> generate_task(int task, const DatasetConfig& cfg, const Rng& base,
                                        unsigned threads = 1);

/// Raster + vector image for an instance (pair canvas for Task 7).
RenderedImage render_instance(const TaskInstance& inst);

/// Problems found when re-deriving the truth with the oracles (empty = ok).
std::vector<std::string> verify_truth(const TaskInstance& inst);

/// Generates every enabled task, writes `<root>/dataset/task<k>/<id>.{png,svg}`
/// and `<root>/dataset/manifest.jsonl`. Returns the manifest rows.
std::vector<TaskInstance> generate_dataset(const DatasetConfig& cfg,
                                           const std::filesystem::path& root,
                                           unsigned threads = 0);

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Re-checks truths, re-renders each instance against its stored hash and
/// decodes each PNG on disk.
VerifyReport verify_dataset(const std::vector<TaskInstance>& manifest,
                            const std::filesystem::path& root, unsigned threads = 0);

std::filesystem::path manifest_path(const std::filesystem::path& root);

}  // namespace gvb
