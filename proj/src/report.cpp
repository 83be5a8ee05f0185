#include "gvb/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gvb/errors.hpp"
#include "gvb/png.hpp"

namespace gvb {

using ojson = nlohmann::ordered_json;

AggregateTable aggregate(const std::vector<ScoreRecord>& scores, const std::vector<std::string>& dims) {
  for (const auto& d : dims)
    if (std::find(std::begin(kReportDims), std::end(kReportDims), d) == std::end(kReportDims))
      throw ParameterError("unknown report dimension: " + d);
  if (scores.empty()) throw ParameterError("aggregate: no score records");
  std::map<std::vector<std::string>, std::pair<double, std::size_t>> groups;
  for (const auto& r : scores) {
    std::vector<std::string> key;
    for (const auto& d : dims) {
      std::string v = r.dim(d);
      key.push_back(v.empty() ? std::string(kMissingDim) : v);
    }
    auto& g = groups[key];
    g.first += r.value;
    ++g.second;
  }
  AggregateTable t;
  t.dims = dims;
  for (const auto& [key, g] : groups) t.rows.push_back({key, g.first / static_cast<double>(g.second), g.second});
  return t;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

std::string to_csv(const AggregateTable& t) {
  std::string out;
  for (const auto& d : t.dims) out += csv_field(d) + ",";
  out += "mean,count\n";
  for (const auto& r : t.rows) {
    for (const auto& k : r.key) out += csv_field(k) + ",";
    out += number(r.mean) + "," + std::to_string(r.count) + "\n";
  }
  return out;
}

AggregateTable table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("csv table: missing header");
  auto header = csv_split(line);
  if (header.size() < 2 || header[header.size() - 2] != "mean" || header.back() != "count")
    throw ParameterError("csv table: header must end with mean,count");
  AggregateTable t;
  t.dims.assign(header.begin(), header.end() - 2);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = csv_split(line);
    if (f.size() != header.size()) throw ParameterError("csv table: ragged row");
    AggregateRow r;
    r.key.assign(f.begin(), f.end() - 2);
    r.mean = std::stod(f[f.size() - 2]);
    r.count = std::stoull(f.back());
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::string to_json_text(const AggregateTable& t) {
  ojson rows = ojson::array();
  for (const auto& r : t.rows) {
    ojson row = ojson::object();
    for (std::size_t i = 0; i < t.dims.size(); ++i) row[t.dims[i]] = r.key[i];
    row["mean"] = r.mean;
    row["count"] = r.count;
    rows.push_back(row);
  }
  return rows.dump(2) + "\n";
}

AggregateTable table_from_json_text(const std::string& text) {
  const ojson rows = ojson::parse(text);
  if (!rows.is_array()) throw ParameterError("json table: expected an array");
  AggregateTable t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    std::vector<std::string> dims;
    AggregateRow r;
    for (const auto& [k, v] : row.items()) {
      if (k == "mean") {
        r.mean = v.get<double>();
      } else if (k == "count") {
        r.count = v.get<std::size_t>();
      } else {
        dims.push_back(k);
        r.key.push_back(v.get<std::string>());
      }
    }
    if (i == 0)
      t.dims = dims;
    else if (dims != t.dims)
      throw ParameterError("json table: rows disagree on columns");
    t.rows.push_back(std::move(r));
  }
  return t;
}

void export_table(const AggregateTable& t, const std::filesystem::path& path, ExportFormat format) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file(path, format == ExportFormat::csv ? to_csv(t) : to_json_text(t));
}

AggregateTable import_table(const std::filesystem::path& path) {
  const auto text = read_text(path);
  if (path.extension() == ".csv") return table_from_csv(text);
  if (path.extension() == ".json") return table_from_json_text(text);
  throw ParameterError("unknown table format: " + path.string());
}

std::vector<std::filesystem::path> write_standard_report(const std::filesystem::path& root,
                                                         const std::vector<ScoreRecord>& scores) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> tables{
      {"overall", {}},
      {"by_model", {"model"}},
      {"by_task", {"task"}},
      {"by_strategy", {"strategy"}},
      {"by_model_task_strategy", {"model", "task", "strategy"}},
      {"by_task_layout", {"model", "task", "layout"}},
      {"by_task_labels", {"model", "task", "labels"}},
      {"by_class", {"model", "strategy", "class"}},
      {"by_node_count", {"model", "task", "node_count"}},
      {"by_pattern_grid", {"model", "strategy", "pattern_grid"}},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, dims] : tables) {
    const auto t = aggregate(scores, dims);
    for (auto [ext, fmt] : {std::pair{".csv", ExportFormat::csv}, std::pair{".json", ExportFormat::json}}) {
      const auto path = root / "report" / (name + ext);
      export_table(t, path, fmt);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace gvb
