#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "gvb/generators.hpp"
#include "gvb/graph.hpp"
#include "gvb/prompts.hpp"
#include "gvb/taskgen.hpp"

namespace gvb {

struct RawResponse;

enum class ParseStatus { ok, recovered, failed };
std::string_view to_string(ParseStatus s);
ParseStatus parse_status_from_string(std::string_view s);

struct CountsAnswer {
  long long nodes = 0, edges = 0;
  friend bool operator==(const CountsAnswer&, const CountsAnswer&) = default;
};
struct ClassAnswer {
  GraphClass cls = GraphClass::tree;
  friend bool operator==(const ClassAnswer&, const ClassAnswer&) = default;
};
/// Task 3 cut edge and Task 5 predicted link, in answer order.
struct EdgeAnswer {
  NodeId u = 0, v = 0;
  friend bool operator==(const EdgeAnswer&, const EdgeAnswer&) = default;
};
struct PatternAnswer {
  std::set<PatternKind> kinds;
  long long count = 0;
  friend bool operator==(const PatternAnswer&, const PatternAnswer&) = default;
};
struct PathAnswer {
  std::vector<NodeId> nodes;
  friend bool operator==(const PathAnswer&, const PathAnswer&) = default;
};
struct MatchAnswer {
  bool match = false;
  friend bool operator==(const MatchAnswer&, const MatchAnswer&) = default;
};

using Answer = std::variant<CountsAnswer, ClassAnswer, EdgeAnswer, PatternAnswer, PathAnswer, MatchAnswer>;

struct ParsedAnswer {
  int task = 1;
  ParseStatus status = ParseStatus::failed;
  /// Present unless status == failed.
  std::optional<Answer> answer;
  /// The extracted JSON object (null when nothing could be extracted).
  nlohmann::json payload;
  std::string error;
};

/// Never throws. `ok`: the whole text is a JSON object; `recovered`: an
/// object was found after removing code fences / prose or after lenient
/// repairs (single quotes, trailing commas, bare words); `failed`: no object,
/// or it does not satisfy the task's answer schema.
ParsedAnswer parse_response(int task, std::string_view text);

/// First JSON object in `text` (fence contents first). Sets `repaired` when
/// lenient fixes were needed.
std::optional<nlohmann::json> extract_json_object(std::string_view text, bool* repaired = nullptr);

// ---- metrics ----

/// 1 - min(MAE / Range, 1); Range = max - min of the truths, or 1 when
/// they are all equal. Throws ParameterError on empty or mismatched input.
double nmae(const std::vector<double>& truth, const std::vector<double>& predicted);

struct CountsScore {
  double nodes = 0.0;
  double edges = 0.0;
  /// Mean of the node and edge components.
  double value = 0.0;
};

/// NMAE over one variation group; a missing prediction counts as 0 / 0.
CountsScore score_counts(const std::vector<std::pair<CountsTruth, std::optional<CountsAnswer>>>& group);

/// 0, 0.5 or 1 for tasks 2, 3, 4, 5 and 7. Failed parses score 0.
///   T2 partial: the answer is the broader class implied by the truth
///       (tree -> acyclic, complete -> cyclic, mesh -> planar).
///   T3, T5 partial: exactly one endpoint of the true edge named.
///   T4 exact: same kind set and total; partial: same kinds, other total.
///   T7: no partial credit.
double score_accuracy(int task, const ParsedAnswer& answer, const GroundTruth& truth);

/// |A n B| / |A u B| over node sets (1 when both are empty).
double score_path(const std::vector<NodeId>& predicted, const std::vector<NodeId>& truth);

enum class Metric { nmae, accuracy, jaccard };
std::string_view to_string(Metric m);
Metric metric_for_task(int task);

struct ScoreRecord {
  std::string instance_id;
  std::string model_id;
  std::string strategy;
  int task = 1;
  Metric metric = Metric::accuracy;
  double value = 0.0;
  ParseStatus parse_status = ParseStatus::failed;
  /// Variation group the instance belongs to.
  std::string group;
  /// Breakdown dimensions; empty when not applicable.
  std::string layout;
  std::string labels;
  std::string cls;
  std::string node_count;
  std::string pattern_grid;
  /// Task 1 only: the node and edge components behind `value`.
  std::optional<double> node_nmae;
  std::optional<double> edge_nmae;
  nlohmann::json answer;

  /// Dimension value by report name ("model", "task", ... ); empty if unset.
  std::string dim(std::string_view name) const;
};

nlohmann::json to_json(const ScoreRecord& r);
ScoreRecord score_record_from_json(const nlohmann::json& j);

/// Scores every manifest instance for each (model, strategy) seen in
/// `responses`. An instance without a response scores 0 as a failed parse.
/// Task 1 records carry their variation group's NMAE.
std::vector<ScoreRecord> score_responses(const std::vector<TaskInstance>& manifest,
                                         const std::vector<RawResponse>& responses);

/// `<root>/scores/<model>/<strategy>.jsonl`, one file per (model, strategy).
std::vector<std::filesystem::path> write_scores(const std::filesystem::path& root,
                                                const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> read_scores(const std::filesystem::path& file);
/// Every `*.jsonl` below `<root>/scores`, in path order.
std::vector<ScoreRecord> read_all_scores(const std::filesystem::path& root);

}  // namespace gvb
