#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gvb/scoring.hpp"

namespace gvb {

inline constexpr std::string_view kReportDims[] = {"model",  "task",  "strategy",   "layout",
                                                   "labels", "class", "node_count", "pattern_grid"};

/// Shown for records that have no value for a dimension.
inline constexpr std::string_view kMissingDim = "-";

struct AggregateRow {
  std::vector<std::string> key;  // one value per dim
  double mean = 0.0;
  std::size_t count = 0;
  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct AggregateTable {
  std::vector<std::string> dims;
  std::vector<AggregateRow> rows;  // lexicographic by key
  friend bool operator==(const AggregateTable&, const AggregateTable&) = default;
};

/// Mean score per group of equal dimension values. No dims gives one
/// overall row. Throws ParameterError for an unknown dim or no records.
AggregateTable aggregate(const std::vector<ScoreRecord>& scores, const std::vector<std::string>& dims);

enum class ExportFormat { csv, json };

/// Header `dims..., mean, count`; means printed with 17 significant digits.
std::string to_csv(const AggregateTable& t);
AggregateTable table_from_csv(const std::string& text);
/// Array of row objects with keys in column order.
std::string to_json_text(const AggregateTable& t);
AggregateTable table_from_json_text(const std::string& text);

void export_table(const AggregateTable& t, const std::filesystem::path& path, ExportFormat format);
/// Format chosen by extension (.csv / .json).
AggregateTable import_table(const std::filesystem::path& path);

/// Tables written by the `report` command: overall, by model/task/strategy,
/// and the per-layout, label, class, node count and pattern breakdowns.
/// Returns the files written under `<root>/report`.
std::vector<std::filesystem::path> write_standard_report(const std::filesystem::path& root,
                                                         const std::vector<ScoreRecord>& scores);

}  // namespace gvb
