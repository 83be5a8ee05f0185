#include "gvb/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <regex>

#include "gvb/errors.hpp"
#include "gvb/eval_client.hpp"
#include "gvb/manifest.hpp"

namespace gvb {

using nlohmann::json;

std::string_view to_string(ParseStatus s) {
  switch (s) {
    case ParseStatus::ok: return "ok";
    case ParseStatus::recovered: return "recovered";
    default: return "failed";
  }
}

ParseStatus parse_status_from_string(std::string_view s) {
  if (s == "ok") return ParseStatus::ok;
  if (s == "recovered") return ParseStatus::recovered;
  if (s == "failed") return ParseStatus::failed;
  throw ParameterError("unknown parse status: " + std::string(s));
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::nmae: return "nmae";
    case Metric::accuracy: return "accuracy";
    default: return "jaccard";
  }
}

Metric metric_for_task(int task) {
  if (task == 1) return Metric::nmae;
  if (task == 6) return Metric::jaccard;
  if (task >= 2 && task <= 7) return Metric::accuracy;
  throw ParameterError("task ids are 1..7");
}

// ---- extraction -------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<json> parse_object(std::string_view s) {
  json j = json::parse(s.begin(), s.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

bool closes_token(std::string_view s, std::size_t i) {
  i = skip_ws(s, i);
  return i >= s.size() || s[i] == ',' || s[i] == '}' || s[i] == ']' || s[i] == ':';
}

void append_escaped(std::string& out, char c) {
  if (c == '"' || c == '\\') out += '\\';
  if (c == '\n') {
    out += "\\n";
    return;
  }
  out += c;
}

/// Single-quoted strings, trailing commas and bare words turned into JSON.
std::string lenient_repair(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '"') {
      out += c;
      for (++i; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
          out += s[i];
          out += s[++i];
          continue;
        }
        if (s[i] == '\n') {
          out += "\\n";
          continue;
        }
        out += s[i];
        if (s[i] == '"') break;
      }
      ++i;
    } else if (c == '\'') {
      std::size_t j = i + 1;
      while (j < s.size() && !(s[j] == '\'' && closes_token(s, j + 1))) ++j;
      out += '"';
      for (std::size_t k = i + 1; k < j && k < s.size(); ++k) append_escaped(out, s[k]);
      out += '"';
      i = j + 1;
    } else if (c == ',') {
      const std::size_t j = skip_ws(s, i + 1);
      if (j < s.size() && (s[j] == '}' || s[j] == ']')) {
        i = j;
      } else {
        out += c;
        ++i;
      }
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && !std::strchr(",}]:\n", s[j])) ++j;
      const auto word = trim(s.substr(i, j - i));
      if (word == "true" || word == "false" || word == "null") {
        out += word;
      } else {
        out += '"';
        for (char w : word) append_escaped(out, w);
        out += '"';
      }
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

/// End of the object starting at `open` (brace depth outside double-quoted strings).
std::optional<std::size_t> matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\')
        ++i;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0) return i;
  }
  return std::nullopt;
}

std::optional<json> first_object(std::string_view s, bool* repaired) {
  int tries = 0;
  for (std::size_t open = s.find('{'); open != std::string_view::npos && tries < 64;
       open = s.find('{', open + 1), ++tries) {
    auto close = matching_brace(s, open);
    if (!close) continue;
    const auto candidate = s.substr(open, *close - open + 1);
    if (auto j = parse_object(candidate)) {
      if (repaired) *repaired = false;
      return j;
    }
    if (auto j = parse_object(lenient_repair(candidate))) {
      if (repaired) *repaired = true;
      return j;
    }
  }
  return std::nullopt;
}

std::vector<std::string_view> fenced_blocks(std::string_view s) {
  std::vector<std::string_view> blocks;
  std::size_t pos = 0;
  while ((pos = s.find("```", pos)) != std::string_view::npos) {
    std::size_t start = s.find('\n', pos + 3);
    if (start == std::string_view::npos) break;
    const std::size_t end = s.find("```", start);
    if (end == std::string_view::npos) {
      blocks.push_back(s.substr(start + 1));
      break;
    }
    blocks.push_back(s.substr(start + 1, end - start - 1));
    pos = end + 3;
  }
  return blocks;
}

}  // namespace

std::optional<json> extract_json_object(std::string_view text, bool* repaired) {
  for (auto block : fenced_blocks(text))
    if (auto j = first_object(block, repaired)) return j;
  return first_object(text, repaired);
}

// ---- schema coercion --------------------------------------------------------------

namespace {

std::optional<long long> as_int(const json& v) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 1e15) return static_cast<long long>(d);
    return std::nullopt;
  }
  if (v.is_string()) {
    const auto s = trim(v.get_ref<const std::string&>());
    static const std::regex number(R"([+-]?\d{1,15})");
    if (std::regex_match(s.begin(), s.end(), number)) return std::stoll(std::string(s));
  }
  return std::nullopt;
}

std::vector<long long> integers_in(const std::string& s) {
  static const std::regex number(R"(-?\d+)");
  std::vector<long long> out;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator(); ++it) {
    const auto str = it->str();
    if (str.size() > 15) return {};
    out.push_back(std::stoll(str));
  }
  return out;
}

std::optional<std::vector<NodeId>> as_nodes(const json& v) {
  std::vector<NodeId> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      auto n = as_int(x);
      if (!n) return std::nullopt;
      out.push_back(static_cast<NodeId>(*n));
    }
    return out;
  }
  if (v.is_string()) {
    for (long long n : integers_in(v.get<std::string>())) out.push_back(static_cast<NodeId>(n));
    return out;
  }
  return std::nullopt;
}

std::optional<EdgeAnswer> as_edge(const json& v) {
  auto nodes = as_nodes(v);
  if (!nodes || nodes->size() != 2) return std::nullopt;
  return EdgeAnswer{(*nodes)[0], (*nodes)[1]};
}

std::string letters_only(const std::string& s) {
  std::string out;
  for (char c : lower(s))
    if (std::isalpha(static_cast<unsigned char>(c)) || c == ' ') out += c;
  return std::string(trim(out));
}

std::optional<GraphClass> as_class(const json& v) {
  if (!v.is_string()) return std::nullopt;
  std::string s = letters_only(v.get<std::string>());
  if (s.size() > 6 && s.ends_with(" graph")) s = s.substr(0, s.size() - 6);
  return try_graph_class(s);
}

std::optional<std::set<PatternKind>> as_patterns(const json& v) {
  std::string all;
  if (v.is_string()) {
    all = v.get<std::string>();
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_string()) return std::nullopt;
      all += " " + x.get<std::string>();
    }
  } else {
    return std::nullopt;
  }
  std::set<PatternKind> kinds;
  static const std::regex word("[a-z]+");
  const std::string lo = lower(all);
  for (auto it = std::sregex_iterator(lo.begin(), lo.end(), word); it != std::sregex_iterator(); ++it) {
    std::string w = it->str();
    if (w.size() > 1 && w.back() == 's') w.pop_back();
    if (auto k = try_pattern_kind(w)) kinds.insert(*k);
  }
  if (kinds.empty()) return std::nullopt;
  return kinds;
}

std::optional<bool> as_yes_no(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (!v.is_string()) return std::nullopt;
  const std::string s = letters_only(v.get<std::string>());
  if (s == "yes" || s == "true") return true;
  if (s == "no" || s == "false") return false;
  return std::nullopt;
}

const json* field(const json& obj, const std::string& name) {
  auto it = obj.find(name);
  if (it != obj.end()) return &*it;
  for (auto i = obj.begin(); i != obj.end(); ++i)
    if (lower(i.key()) == name) return &*i;
  return nullptr;
}

std::optional<Answer> coerce(int task, const json& obj, std::string& error) {
  for (const auto& f : answer_schema(task))
    if (f.required && !field(obj, f.name)) {
      error = "missing field " + f.name;
      return std::nullopt;
    }
  auto bad = [&](const char* name) {
    error = std::string("field ") + name + " has an unusable value";
    return std::nullopt;
  };
  switch (task) {
    case 1: {
      auto n = as_int(*field(obj, "total_nodes"));
      if (!n) return bad("total_nodes");
      auto m = as_int(*field(obj, "total_edges"));
      if (!m) return bad("total_edges");
      return CountsAnswer{*n, *m};
    }
    case 2: {
      auto c = as_class(*field(obj, "type_graph"));
      if (!c) return bad("type_graph");
      return ClassAnswer{*c};
    }
    case 3: {
      auto e = as_edge(*field(obj, "cut_edge"));
      if (!e) return bad("cut_edge");
      return *e;
    }
    case 4: {
      auto k = as_patterns(*field(obj, "pattern"));
      if (!k) return bad("pattern");
      auto n = as_int(*field(obj, "number_of_patterns"));
      if (!n) return bad("number_of_patterns");
      return PatternAnswer{*k, *n};
    }
    case 5: {
      auto e = as_edge(*field(obj, "nodes_prediction"));
      if (!e) return bad("nodes_prediction");
      return *e;
    }
    case 6: {
      auto p = as_nodes(*field(obj, "shortest_path"));
      if (!p) return bad("shortest_path");
      return PathAnswer{*p};
    }
    case 7: {
      auto m = as_yes_no(*field(obj, "match"));
      if (!m) return bad("match");
      return MatchAnswer{*m};
    }
    default: error = "unknown task"; return std::nullopt;
  }
}

}  // namespace

ParsedAnswer parse_response(int task, std::string_view text) {
  ParsedAnswer out;
  out.task = task;
  try {
    if (task < 1 || task > kTaskCount) {
      out.error = "unknown task";
      return out;
    }
    std::optional<json> obj = parse_object(trim(text));
    ParseStatus status = ParseStatus::ok;
    if (!obj) {
      obj = extract_json_object(text);
      status = ParseStatus::recovered;
    }
    if (!obj) {
      out.error = "no JSON object found";
      return out;
    }
    out.payload = *obj;
    out.answer = coerce(task, *obj, out.error);
    out.status = out.answer ? status : ParseStatus::failed;
  } catch (const std::exception& e) {
    out.answer.reset();
    out.status = ParseStatus::failed;
    out.error = e.what();
  }
  return out;
}

// ---- metrics ---------------------------------------------------------------------

double nmae(const std::vector<double>& truth, const std::vector<double>& predicted) {
  if (truth.empty()) throw ParameterError("nmae: empty group");
  if (truth.size() != predicted.size()) throw ParameterError("nmae: size mismatch");
  double mae = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) mae += std::fabs(truth[i] - predicted[i]);
  mae /= static_cast<double>(truth.size());
  const auto [lo, hi] = std::minmax_element(truth.begin(), truth.end());
  const double range = *hi == *lo ? 1.0 : *hi - *lo;
  return 1.0 - std::min(mae / range, 1.0);
}

CountsScore score_counts(const std::vector<std::pair<CountsTruth, std::optional<CountsAnswer>>>& group) {
  if (group.empty()) throw ParameterError("score_counts: empty group");
  std::vector<double> tn, te, pn, pe;
  for (const auto& [t, a] : group) {
    tn.push_back(t.nodes);
    te.push_back(t.edges);
    pn.push_back(a ? static_cast<double>(a->nodes) : 0.0);
    pe.push_back(a ? static_cast<double>(a->edges) : 0.0);
  }
  CountsScore s;
  s.nodes = nmae(tn, pn);
  s.edges = nmae(te, pe);
  s.value = (s.nodes + s.edges) / 2.0;
  return s;
}

namespace {

double edge_credit(const EdgeAnswer& a, NodeId u, NodeId v) {
  const std::set<NodeId> truth{u, v}, answer{a.u, a.v};
  if (answer == truth) return 1.0;
  int hits = 0;
  for (NodeId x : answer) hits += truth.count(x) ? 1 : 0;
  return hits == 1 ? 0.5 : 0.0;
}

bool implied_superclass(GraphClass truth, GraphClass answer) {
  return (truth == GraphClass::tree && answer == GraphClass::acyclic) ||
         (truth == GraphClass::complete && answer == GraphClass::cyclic) ||
         (truth == GraphClass::mesh && answer == GraphClass::planar);
}

}  // namespace

double score_accuracy(int task, const ParsedAnswer& parsed, const GroundTruth& truth) {
  if (parsed.status == ParseStatus::failed || !parsed.answer || task_of(truth) != task) return 0.0;
  const Answer& a = *parsed.answer;
  switch (task) {
    case 2: {
      const auto* x = std::get_if<ClassAnswer>(&a);
      if (!x) return 0.0;
      const GraphClass t = std::get<ClassTruth>(truth).cls;
      return x->cls == t ? 1.0 : implied_superclass(t, x->cls) ? 0.5 : 0.0;
    }
    case 3: {
      const auto* x = std::get_if<EdgeAnswer>(&a);
      const auto& t = std::get<CutEdgeTruth>(truth);
      return x ? edge_credit(*x, t.u, t.v) : 0.0;
    }
    case 4: {
      const auto* x = std::get_if<PatternAnswer>(&a);
      if (!x) return 0.0;
      std::set<PatternKind> kinds;
      long long total = 0;
      for (auto [k, n] : std::get<CensusTruth>(truth).census)
        if (n > 0) kinds.insert(k), total += n;
      if (x->kinds != kinds) return 0.0;
      return x->count == total ? 1.0 : 0.5;
    }
    case 5: {
      const auto* x = std::get_if<EdgeAnswer>(&a);
      const auto& t = std::get<MissingEdgeTruth>(truth);
      return x ? edge_credit(*x, t.u, t.v) : 0.0;
    }
    case 7: {
      const auto* x = std::get_if<MatchAnswer>(&a);
      return x && x->match == std::get<MatchTruth>(truth).match ? 1.0 : 0.0;
    }
    default: throw ParameterError("score_accuracy: task " + std::to_string(task) + " is not accuracy-scored");
  }
}

double score_path(const std::vector<NodeId>& predicted, const std::vector<NodeId>& truth) {
  const std::set<NodeId> a(predicted.begin(), predicted.end()), b(truth.begin(), truth.end());
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (NodeId x : a) common += b.count(x);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

// ---- records ------------------------------------------------------------------------

std::string ScoreRecord::dim(std::string_view name) const {
  if (name == "model") return model_id;
  if (name == "task") return std::to_string(task);
  if (name == "strategy") return strategy;
  if (name == "layout") return layout;
  if (name == "labels") return labels;
  if (name == "class") return cls;
  if (name == "node_count") return node_count;
  if (name == "pattern_grid") return pattern_grid;
  throw ParameterError("unknown dimension: " + std::string(name));
}

json to_json(const ScoreRecord& r) {
  json j{{"instance_id", r.instance_id},
         {"model_id", r.model_id},
         {"strategy", r.strategy},
         {"task", r.task},
         {"metric", std::string(to_string(r.metric))},
         {"value", r.value},
         {"parse_status", std::string(to_string(r.parse_status))},
         {"group", r.group}};
  auto opt = [&](const char* key, const std::string& v) { j[key] = v.empty() ? json() : json(v); };
  opt("layout", r.layout);
  opt("labels", r.labels);
  opt("class", r.cls);
  opt("node_count", r.node_count);
  opt("pattern_grid", r.pattern_grid);
  if (r.node_nmae) {
    j["node_nmae"] = *r.node_nmae;
    j["edge_nmae"] = *r.edge_nmae;
    j["nmae_rule"] = "mean of node and edge NMAE";
  }
  j["answer"] = r.answer;
  return j;
}

ScoreRecord score_record_from_json(const json& j) {
  ScoreRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.model_id = j.at("model_id").get<std::string>();
  r.strategy = j.at("strategy").get<std::string>();
  r.task = j.at("task").get<int>();
  const std::string metric = j.at("metric").get<std::string>();
  r.metric = metric == "nmae" ? Metric::nmae : metric == "jaccard" ? Metric::jaccard : Metric::accuracy;
  r.value = j.at("value").get<double>();
  r.parse_status = parse_status_from_string(j.at("parse_status").get<std::string>());
  r.group = j.value("group", "");
  auto opt = [&](const char* key) {
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? std::string() : it->get<std::string>();
  };
  r.layout = opt("layout");
  r.labels = opt("labels");
  r.cls = opt("class");
  r.node_count = opt("node_count");
  r.pattern_grid = opt("pattern_grid");
  if (j.contains("node_nmae")) {
    r.node_nmae = j.at("node_nmae").get<double>();
    r.edge_nmae = j.at("edge_nmae").get<double>();
  }
  r.answer = j.value("answer", json());
  return r;
}

namespace {

/// Answers name nodes by label; map them back to node ids (-1 if unknown).
void labels_to_ids(Answer& a, const Graph& g) {
  std::map<std::string, NodeId> id;
  for (NodeId v = 0; v < g.node_count(); ++v) id[g.label_of(v)] = v;
  auto map = [&](NodeId x) {
    auto it = id.find(std::to_string(x));
    return it == id.end() ? -1 : it->second;
  };
  if (auto* e = std::get_if<EdgeAnswer>(&a)) {
    e->u = map(e->u);
    e->v = map(e->v);
  } else if (auto* p = std::get_if<PathAnswer>(&a)) {
    for (auto& x : p->nodes) x = map(x);
  }
}

ScoreRecord base_record(const TaskInstance& inst, const RawResponse* r, const std::string& model,
                        const std::string& strategy) {
  ScoreRecord rec;
  rec.instance_id = inst.instance_id;
  rec.model_id = r ? r->model_id : model;
  rec.strategy = r ? r->strategy : strategy;
  rec.task = inst.task;
  rec.metric = metric_for_task(inst.task);
  rec.group = inst.variant;
  rec.layout = std::string(to_string(inst.style.layout));
  rec.labels = inst.style.show_labels ? "labeled" : "unlabeled";
  if (const auto* c = std::get_if<ClassTruth>(&inst.truth)) rec.cls = std::string(to_string(c->cls));
  rec.node_count = std::to_string(inst.graph.node_count());
  if (inst.task == 4) rec.pattern_grid = inst.variant;
  return rec;
}

}  // namespace

std::vector<ScoreRecord> score_responses(const std::vector<TaskInstance>& manifest,
                                         const std::vector<RawResponse>& responses) {
  std::vector<std::pair<std::string, std::string>> runs;  // (model, strategy), first-seen order
  std::map<std::tuple<std::string, std::string, std::string>, const RawResponse*> by_key;
  const auto latest = latest_responses(responses);
  for (const auto& r : latest) {
    std::pair<std::string, std::string> run{r.model_id, r.strategy};
    if (std::find(runs.begin(), runs.end(), run) == runs.end()) runs.push_back(run);
    by_key[{r.model_id, r.strategy, r.instance_id}] = &r;
  }
  std::vector<ScoreRecord> out;
  for (const auto& [model, strategy] : runs) {
    struct Pending {
      std::size_t record;
      CountsTruth truth;
      std::optional<CountsAnswer> answer;
    };
    std::map<std::string, std::vector<Pending>> t1_groups;
    for (const auto& inst : manifest) {
      auto it = by_key.find({model, strategy, inst.instance_id});
      const RawResponse* r = it == by_key.end() ? nullptr : it->second;
      ScoreRecord rec = base_record(inst, r, model, strategy);
      ParsedAnswer parsed;
      parsed.task = inst.task;
      if (r && r->ok()) parsed = parse_response(inst.task, r->text);
      if (parsed.answer) labels_to_ids(*parsed.answer, inst.graph);
      rec.parse_status = parsed.status;
      rec.answer = parsed.payload;
      if (inst.task == 1) {
        std::optional<CountsAnswer> a;
        if (parsed.answer) a = std::get<CountsAnswer>(*parsed.answer);
        t1_groups[inst.variant].push_back({out.size(), std::get<CountsTruth>(inst.truth), a});
      } else if (inst.task == 6) {
        const auto* p = parsed.answer ? std::get_if<PathAnswer>(&*parsed.answer) : nullptr;
        rec.value = p ? score_path(p->nodes, std::get<PathTruth>(inst.truth).path.nodes) : 0.0;
      } else {
        rec.value = score_accuracy(inst.task, parsed, inst.truth);
      }
      out.push_back(std::move(rec));
    }
    for (const auto& [variant, members] : t1_groups) {
      std::vector<std::pair<CountsTruth, std::optional<CountsAnswer>>> group;
      for (const auto& m : members) group.emplace_back(m.truth, m.answer);
      const CountsScore s = score_counts(group);
      for (const auto& m : members) {
        out[m.record].value = s.value;
        out[m.record].node_nmae = s.nodes;
        out[m.record].edge_nmae = s.edges;
      }
    }
  }
  return out;
}

std::vector<std::filesystem::path> write_scores(const std::filesystem::path& root,
                                                const std::vector<ScoreRecord>& records) {
  std::map<std::filesystem::path, std::vector<const ScoreRecord*>> files;
  for (const auto& r : records)
    files[root / "scores" / sanitize_model_id(r.model_id) / (r.strategy + ".jsonl")].push_back(&r);
  std::vector<std::filesystem::path> written;
  for (const auto& [path, rows] : files) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    for (const auto* r : rows) f << to_json(*r).dump() << '\n';
    if (!f) throw std::runtime_error("write failed: " + path.string());
    written.push_back(path);
  }
  return written;
}

std::vector<ScoreRecord> read_scores(const std::filesystem::path& file) {
  std::vector<ScoreRecord> out;
  for (const auto& j : read_jsonl(file)) out.push_back(score_record_from_json(j));
  return out;
}

std::vector<ScoreRecord> read_all_scores(const std::filesystem::path& root) {
  const auto dir = root / "scores";
  std::vector<std::filesystem::path> files;
  if (std::filesystem::exists(dir))
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<ScoreRecord> out;
  for (const auto& f : files)
    for (auto& r : read_scores(f)) out.push_back(std::move(r));
  return out;
}

}  // namespace gvb
