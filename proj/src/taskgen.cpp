#include "gvb/taskgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gvb/errors.hpp"
#include "gvb/generators.hpp"
#include "gvb/manifest.hpp"
#include "gvb/png.hpp"

namespace gvb {

using nlohmann::json;

// ---- truth json -----------------------------------------------------------

namespace {

json pair_json(const char* kind, NodeId u, NodeId v) { return {{"kind", kind}, {"u", u}, {"v", v}}; }

}  // namespace

json to_json(const GroundTruth& t) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CountsTruth>) {
          return {{"kind", "counts"}, {"nodes", x.nodes}, {"edges", x.edges}};
        } else if constexpr (std::is_same_v<T, ClassTruth>) {
          return {{"kind", "class"}, {"class", std::string(to_string(x.cls))}};
        } else if constexpr (std::is_same_v<T, CutEdgeTruth>) {
          return pair_json("cut_edge", x.u, x.v);
        } else if constexpr (std::is_same_v<T, CensusTruth>) {
          json p = json::object();
          for (auto [k, n] : x.census) p[std::string(to_string(k))] = n;
          return {{"kind", "census"}, {"patterns", p}};
        } else if constexpr (std::is_same_v<T, MissingEdgeTruth>) {
          return pair_json("missing_edge", x.u, x.v);
        } else if constexpr (std::is_same_v<T, PathTruth>) {
          return {{"kind", "path"},
                  {"source", x.source},
                  {"target", x.target},
                  {"nodes", x.path.nodes},
                  {"total_weight", x.path.total_weight}};
        } else {
          return {{"kind", "match"}, {"match", x.match}};
        }
      },
      t);
}

GroundTruth truth_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "counts") return CountsTruth{j.at("nodes").get<int>(), j.at("edges").get<int>()};
  if (kind == "class") return ClassTruth{graph_class_from_string(j.at("class").get<std::string>())};
  if (kind == "cut_edge") return CutEdgeTruth{j.at("u").get<int>(), j.at("v").get<int>()};
  if (kind == "missing_edge") return MissingEdgeTruth{j.at("u").get<int>(), j.at("v").get<int>()};
  if (kind == "census") {
    CensusTruth c;
    for (const auto& [name, n] : j.at("patterns").items()) {
      auto k = try_pattern_kind(name);
      if (!k) throw ParameterError("unknown pattern kind: " + name);
      c.census[*k] = n.get<int>();
    }
    return c;
  }
  if (kind == "path") {
    PathTruth p;
    p.source = j.at("source").get<int>();
    p.target = j.at("target").get<int>();
    p.path.nodes = j.at("nodes").get<std::vector<NodeId>>();
    p.path.total_weight = j.at("total_weight").get<long long>();
    return p;
  }
  if (kind == "match") return MatchTruth{j.at("match").get<bool>()};
  throw ParameterError("unknown truth kind: " + kind);
}

// ---- instance json ----------------------------------------------------------

namespace {

json positions_json(const Positions& p) {
  json a = json::array();
  for (const auto& q : p) a.push_back({q.x, q.y});
  return a;
}

Positions positions_from_json(const json& j) {
  Positions p;
  for (const auto& q : j) p.push_back({q.at(0).get<double>(), q.at(1).get<double>()});
  return p;
}

}  // namespace

json to_json(const TaskInstance& inst) {
  json j;
  j["instance_id"] = inst.instance_id;
  j["task"] = inst.task;
  j["variant"] = inst.variant;
  j["detail"] = inst.detail;
  j["image_path"] = inst.image_path;
  j["svg_path"] = inst.svg_path;
  j["image_hash"] = inst.image_hash;
  j["seed"] = inst.seed;
  j["truth"] = to_json(inst.truth);
  j["style"] = to_json(inst.style);
  j["graph"] = to_json(inst.graph);
  j["positions"] = positions_json(inst.positions);
  if (inst.graph2) {
    j["graph2"] = to_json(*inst.graph2);
    j["positions2"] = positions_json(inst.positions2);
    if (inst.style2) j["style2"] = to_json(*inst.style2);
  }
  return j;
}

TaskInstance instance_from_json(const json& j) {
  TaskInstance t;
  t.instance_id = j.at("instance_id").get<std::string>();
  t.task = j.at("task").get<int>();
  t.variant = j.value("variant", "");
  t.detail = j.value("detail", "");
  t.image_path = j.value("image_path", "");
  t.svg_path = j.value("svg_path", "");
  t.image_hash = j.value("image_hash", "");
  t.seed = j.value("seed", std::uint64_t{0});
  t.truth = truth_from_json(j.at("truth"));
  if (task_of(t.truth) != t.task)
    throw ParameterError(t.instance_id + ": truth kind does not match task " + std::to_string(t.task));
  t.style = style_from_json(j.at("style"));
  t.graph = graph_from_json(j.at("graph"));
  t.positions = positions_from_json(j.at("positions"));
  if (j.contains("graph2")) {
    t.graph2 = graph_from_json(j.at("graph2"));
    t.positions2 = positions_from_json(j.at("positions2"));
    if (j.contains("style2")) t.style2 = style_from_json(j.at("style2"));
  }
  return t;
}

// ---- config -----------------------------------------------------------------

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Task1Config, nodes, edge_probability, layouts,
                                                labels, directed, colors, overlap_severity)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Task2Config, classes, min_nodes, max_nodes,
                                                edge_probability)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Task3Config, node_counts, chord_probability)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Task4Config, kind_sets, totals, chain_min,
                                                chain_max, clique_min, clique_max, star_min,
                                                star_max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Task5Config, node_counts)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Task6Config, node_counts, edge_probability,
                                                weight_min, weight_max, layout, directed, source,
                                                target)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Task7Config, node_counts, edge_probability,
                                                relabeled_fraction, layouts)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(DatasetConfig, seed, replicates, tasks,
                                                max_attempts, task1, task2, task3, task4, task5,
                                                task6, task7)

json to_json(const DatasetConfig& c) {
  json j = c;
  return j;
}

namespace {

void reject_unknown_keys(const json& given, const json& reference, const std::string& where) {
  if (!given.is_object()) return;
  for (const auto& [key, value] : given.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!reference.contains(key)) throw ConfigError("unknown config field: " + path);
    if (value.is_object()) reject_unknown_keys(value, reference.at(key), path);
  }
}

std::vector<PatternKind> parse_kind_set(const std::string& s) {
  std::vector<PatternKind> kinds;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, '+')) {
    auto k = try_pattern_kind(part);
    if (!k) throw ConfigError("task4.kind_sets: unknown pattern kind '" + part + "' in '" + s + "'");
    if (std::find(kinds.begin(), kinds.end(), *k) != kinds.end())
      throw ConfigError("task4.kind_sets: repeated kind in '" + s + "'");
    kinds.push_back(*k);
  }
  if (kinds.empty()) throw ConfigError("task4.kind_sets: empty kind set");
  return kinds;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool is_prob(double p) { return p >= 0.0 && p <= 1.0; }

template <typename T>
void require_nonempty(const std::vector<T>& v, const std::string& name) {
  require(!v.empty(), name + " must not be empty");
}

void require_layouts(const std::vector<std::string>& v, const std::string& name) {
  require_nonempty(v, name);
  for (const auto& s : v) {
    try {
      layout_kind_from_string(s);
    } catch (const ParameterError&) {
      throw ConfigError(name + ": unknown layout '" + s + "'");
    }
  }
}

}  // namespace

DatasetConfig dataset_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j, to_json(DatasetConfig{}), "");
  DatasetConfig c;
  try {
    c = j.get<DatasetConfig>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

void validate(const DatasetConfig& c) {
  require(c.replicates >= 1, "replicates must be at least 1");
  require(c.max_attempts >= 1, "max_attempts must be at least 1");
  require_nonempty(c.tasks, "tasks");
  std::set<int> seen;
  for (int t : c.tasks) {
    require(t >= 1 && t <= kTaskCount, "tasks: task ids are 1..7, got " + std::to_string(t));
    require(seen.insert(t).second, "tasks: duplicate task " + std::to_string(t));
  }

  const auto& t1 = c.task1;
  require(t1.nodes >= 1, "task1.nodes must be at least 1");
  require(is_prob(t1.edge_probability), "task1.edge_probability must be in [0,1]");
  require_layouts(t1.layouts, "task1.layouts");
  require_nonempty(t1.labels, "task1.labels");
  require_nonempty(t1.directed, "task1.directed");
  require_nonempty(t1.colors, "task1.colors");
  for (const auto& s : t1.colors)
    require(s == "uniform" || s == "random", "task1.colors: expected uniform or random, got '" + s + "'");
  require(is_prob(t1.overlap_severity), "task1.overlap_severity must be in [0,1]");

  const auto& t2 = c.task2;
  require_nonempty(t2.classes, "task2.classes");
  for (const auto& s : t2.classes)
    require(try_graph_class(s).has_value(), "task2.classes: unknown class '" + s + "'");
  require(t2.min_nodes >= 4 && t2.min_nodes <= t2.max_nodes,
          "task2 node range must satisfy 4 <= min_nodes <= max_nodes");
  require(t2.max_nodes <= 50, "task2.max_nodes must not exceed 50");
  require(is_prob(t2.edge_probability), "task2.edge_probability must be in [0,1]");

  const auto& t3 = c.task3;
  require_nonempty(t3.node_counts, "task3.node_counts");
  for (int n : t3.node_counts)
    require(n >= 6 && n % 2 == 0 && n <= 50, "task3.node_counts: even counts in [6,50], got " + std::to_string(n));
  require(is_prob(t3.chord_probability), "task3.chord_probability must be in [0,1]");

  const auto& t4 = c.task4;
  require_nonempty(t4.kind_sets, "task4.kind_sets");
  for (const auto& s : t4.kind_sets) parse_kind_set(s);
  require_nonempty(t4.totals, "task4.totals");
  for (int n : t4.totals) require(n >= 1 && n <= 8, "task4.totals must be in [1,8]");
  require(t4.chain_min >= 2 && t4.chain_min <= t4.chain_max, "task4 chain sizes need 2 <= min <= max");
  require(t4.clique_min >= 3 && t4.clique_min <= t4.clique_max, "task4 clique sizes need 3 <= min <= max");
  require(t4.star_min >= 4 && t4.star_min <= t4.star_max, "task4 star sizes need 4 <= min <= max");

  require_nonempty(c.task5.node_counts, "task5.node_counts");
  for (int n : c.task5.node_counts)
    require(n >= 3 && n <= 50, "task5.node_counts must be in [3,50]");

  const auto& t6 = c.task6;
  require_nonempty(t6.node_counts, "task6.node_counts");
  for (int n : t6.node_counts) require(n >= 2 && n <= 50, "task6.node_counts must be in [2,50]");
  require(is_prob(t6.edge_probability) && t6.edge_probability > 0.0,
          "task6.edge_probability must be in (0,1]");
  require(t6.weight_min <= t6.weight_max, "task6 weight range is empty");
  require_layouts({t6.layout}, "task6.layout");
  require(t6.layout != "planar", "task6.layout: planar drawings are not available for random graphs");
  const int n6 = *std::min_element(t6.node_counts.begin(), t6.node_counts.end());
  require(t6.source >= -1 && t6.source < n6, "task6.source out of range");
  require(t6.target >= -1 && t6.target < n6, "task6.target out of range");
  {
    const int s = t6.source < 0 ? 0 : t6.source;
    for (int n : t6.node_counts) {
      const int t = t6.target < 0 ? n - 1 : t6.target;
      require(s != t, "task6 source and target coincide");
    }
  }

  const auto& t7 = c.task7;
  require_nonempty(t7.node_counts, "task7.node_counts");
  for (int n : t7.node_counts) require(n >= 3 && n <= 50, "task7.node_counts must be in [3,50]");
  require(is_prob(t7.edge_probability), "task7.edge_probability must be in [0,1]");
  require(is_prob(t7.relabeled_fraction), "task7.relabeled_fraction must be in [0,1]");
  require_layouts(t7.layouts, "task7.layouts");
  for (const auto& s : t7.layouts) require(s != "planar", "task7.layouts: planar is not available");
}

int expected_count(int task, const DatasetConfig& c) {
  const int r = c.replicates;
  switch (task) {
    case 1:
      return static_cast<int>(c.task1.layouts.size() * c.task1.labels.size() *
                              c.task1.directed.size() * c.task1.colors.size()) * r;
    case 2: return static_cast<int>(c.task2.classes.size()) * r;
    case 3: return static_cast<int>(c.task3.node_counts.size()) * r;
    case 4: return static_cast<int>(c.task4.kind_sets.size() * c.task4.totals.size()) * r;
    case 5: return static_cast<int>(c.task5.node_counts.size()) * r;
    case 6: return static_cast<int>(c.task6.node_counts.size()) * r;
    case 7: return static_cast<int>(c.task7.node_counts.size()) * 2 * r;
    default: throw ParameterError("task ids are 1..7");
  }
}

// ---- generation ---------------------------------------------------------------

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const Rgb kPairColors[] = {{0x1f, 0x78, 0xb4}, {0x33, 0xa0, 0x2c}, {0xe3, 0x1a, 0x1c},
                           {0xff, 0x7f, 0x00}, {0x6a, 0x3d, 0x9a}, {0xb1, 0x59, 0x28}};

int radius_for(int n) { return n <= 10 ? 15 : n <= 20 ? 11 : 9; }

bool well_spaced(const Positions& pos, const StyleSpec& style, bool pair = false) {
  if (pos.size() < 2 || pos.size() > 10) return true;
  return min_pairwise_distance(pos) >= node_diameter_unit(style, pair);
}

std::string id_part(std::string s) {
  for (char& ch : s) {
    if (ch == '+') ch = '_';
    if (ch == '/') ch = '-';
  }
  return s;
}

std::string two_digits(int i) {
  std::string s = std::to_string(i);
  return s.size() < 2 ? "0" + s : s;
}

/// One cell of the generation grid; `build` is retried with fresh streams.
struct Cell {
  std::string variant;
  int replicate = 0;  // 0-based
  std::function<std::optional<TaskInstance>(Rng&)> build;
};

struct Plan {
  std::vector<Cell> cells;
};

Graph labeled(Graph g) {
  g.set_index_labels();
  return g;
}

std::optional<TaskInstance> task1_cell(const DatasetConfig& cfg, LayoutKind layout, bool labels,
                                       bool directed, bool random_colors, Rng& rng) {
  const auto& c = cfg.task1;
  Graph g = random_graph(c.nodes, c.edge_probability, directed, std::nullopt, rng);
  if (labels) g.set_index_labels();
  StyleSpec style;
  style.layout = layout;
  style.show_labels = labels;
  style.directed_arrows = directed;
  style.node_radius_px = radius_for(c.nodes);
  style.color_scheme = random_colors ? ColorScheme::random_palette(rng.next_u64()) : ColorScheme{};
  style.overlap_severity = c.overlap_severity;
  Positions pos;
  if (layout == LayoutKind::planar) {
    auto drawing = find_planar_drawing(g, rng);
    if (!drawing) return std::nullopt;
    g.set_planar_certificate({*drawing});
    pos = *drawing;
  } else {
    pos = compute_layout(g, layout, rng);
  }
  if (c.overlap_severity > 0.0)
    pos = inject_overlap(pos, c.overlap_severity, node_diameter_unit(style), rng);
  else if (layout != LayoutKind::random && !well_spaced(pos, style))
    return std::nullopt;
  TaskInstance t;
  t.graph = std::move(g);
  t.positions = std::move(pos);
  t.style = style;
  t.truth = CountsTruth{t.graph.node_count(), static_cast<int>(t.graph.edge_count())};
  return t;
}

std::optional<TaskInstance> task2_cell(const DatasetConfig& cfg, GraphClass cls, Rng& rng) {
  const auto& c = cfg.task2;
  TypedGraphParams params;
  params.nodes = static_cast<int>(rng.uniform_int(c.min_nodes, c.max_nodes));
  params.edge_probability = c.edge_probability;
  Graph g = typed_graph(cls, params, rng);
  g.set_index_labels();
  StyleSpec style;
  style.directed_arrows = g.directed();
  style.node_radius_px = radius_for(g.node_count());
  Positions pos;
  if (cls == GraphClass::planar) {
    // Prefer a force-directed crossing-free drawing; fall back to the
    // construction embedding. Either way the drawing shown is the certificate.
    if (auto drawing = find_planar_drawing(g, rng, 10); drawing && well_spaced(*drawing, style))
      g.set_planar_certificate({*drawing});
    pos = compute_layout(g, LayoutKind::planar, rng);
    style.layout = LayoutKind::planar;
  } else {
    pos = compute_layout(g, LayoutKind::spring, rng);
  }
  if (!well_spaced(pos, style)) return std::nullopt;
  TaskInstance t;
  t.graph = std::move(g);
  t.positions = std::move(pos);
  t.style = style;
  t.truth = ClassTruth{cls};
  return t;
}

/// Random Hamiltonian cycle over `nodes` plus chords; 2-edge-connected.
void add_cycle_with_chords(Graph& g, const std::vector<NodeId>& nodes, double chord_p, Rng& rng) {
  const std::size_t k = nodes.size();
  for (std::size_t i = 0; i < k; ++i) g.add_edge(nodes[i], nodes[(i + 1) % k]);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 2; j < k; ++j) {
      if (i == 0 && j == k - 1) continue;
      if (rng.bernoulli(chord_p)) g.add_edge(nodes[i], nodes[j]);
    }
}

std::optional<TaskInstance> task3_cell(const DatasetConfig& cfg, int n, Rng& rng) {
  const int half = n / 2;
  std::vector<NodeId> a(half), b(n - half);
  for (int i = 0; i < half; ++i) a[i] = i;
  for (int i = half; i < n; ++i) b[i - half] = i;
  Graph g(n, false);
  add_cycle_with_chords(g, a, cfg.task3.chord_probability, rng);
  add_cycle_with_chords(g, b, cfg.task3.chord_probability, rng);
  const NodeId x = a[rng.uniform_int(0, half - 1)];
  const NodeId y = b[rng.uniform_int(0, n - half - 1)];
  g.add_edge(x, y);
  const auto perm = rng.permutation(n);
  g = labeled(g.permuted(perm));
  const UndirectedEdge cut = std::minmax(perm[x], perm[y]);
  if (find_bridges(g) != std::vector<UndirectedEdge>{cut}) return std::nullopt;
  StyleSpec style;
  style.node_radius_px = radius_for(n);
  Positions pos = compute_layout(g, LayoutKind::spring, rng);
  if (!well_spaced(pos, style)) return std::nullopt;
  TaskInstance t;
  t.graph = std::move(g);
  t.positions = std::move(pos);
  t.style = style;
  t.truth = CutEdgeTruth{cut.first, cut.second};
  return t;
}

std::optional<TaskInstance> task4_cell(const DatasetConfig& cfg, const std::vector<PatternKind>& kinds,
                                       int total, Rng& rng) {
  const auto& c = cfg.task4;
  const int count = std::max<int>(total, static_cast<int>(kinds.size()));
  std::vector<PatternKind> assigned(kinds.begin(), kinds.end());
  while (static_cast<int>(assigned.size()) < count)
    assigned.push_back(kinds[rng.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1)]);
  std::vector<PatternSpec> specs;
  PatternCensus census;
  for (PatternKind k : assigned) {
    int lo = c.chain_min, hi = c.chain_max;
    if (k == PatternKind::clique) lo = c.clique_min, hi = c.clique_max;
    if (k == PatternKind::star) lo = c.star_min, hi = c.star_max;
    specs.push_back({k, static_cast<int>(rng.uniform_int(lo, hi))});
    ++census[k];
  }
  Graph g = labeled(pattern_graph(specs, rng));
  StyleSpec style;
  style.node_radius_px = radius_for(g.node_count());
  Positions pos = compute_layout(g, LayoutKind::spring, rng);
  if (!well_spaced(pos, style)) return std::nullopt;
  TaskInstance t;
  t.graph = std::move(g);
  t.positions = std::move(pos);
  t.style = style;
  t.truth = CensusTruth{census};
  return t;
}

std::optional<TaskInstance> task5_cell(int n, Rng& rng) {
  Graph g(n, false);
  const int drop = static_cast<int>(rng.uniform_int(0, n * (n - 1) / 2 - 1));
  UndirectedEdge missing{};
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++idx) {
      if (idx == drop)
        missing = {i, j};
      else
        g.add_edge(i, j);
    }
  g.set_index_labels();
  StyleSpec style;
  style.node_radius_px = radius_for(n);
  Positions pos = compute_layout(g, LayoutKind::spring, rng);
  if (!well_spaced(pos, style)) return std::nullopt;
  TaskInstance t;
  t.graph = std::move(g);
  t.positions = std::move(pos);
  t.style = style;
  t.truth = MissingEdgeTruth{missing.first, missing.second};
  return t;
}

std::optional<TaskInstance> task6_cell(const DatasetConfig& cfg, int n, Rng& rng) {
  const auto& c = cfg.task6;
  Graph g = labeled(random_graph(n, c.edge_probability, c.directed,
                                 WeightRange{c.weight_min, c.weight_max}, rng));
  const NodeId s = c.source < 0 ? 0 : c.source;
  const NodeId tgt = c.target < 0 ? n - 1 : c.target;
  auto path = shortest_path(g, s, tgt);
  if (!path) return std::nullopt;
  StyleSpec style;
  style.layout = layout_kind_from_string(c.layout);
  style.directed_arrows = c.directed;
  style.weight_labels = true;
  style.node_radius_px = radius_for(n);
  Positions pos = compute_layout(g, style.layout, rng);
  if (!well_spaced(pos, style)) return std::nullopt;
  TaskInstance t;
  t.graph = std::move(g);
  t.positions = std::move(pos);
  t.style = style;
  t.truth = PathTruth{*path, s, tgt};
  return t;
}

enum class PairKind { identical, relabeled, rewired };

std::optional<TaskInstance> task7_cell(const DatasetConfig& cfg, int n, PairKind kind, Rng& rng) {
  const auto& c = cfg.task7;
  Graph g1 = labeled(random_graph(n, c.edge_probability, false, std::nullopt, rng));
  if (!is_connected(g1)) return std::nullopt;
  Graph g2 = g1;
  if (kind == PairKind::relabeled) {
    g2 = g1.permuted(rng.permutation(n));
  } else if (kind == PairKind::rewired) {
    auto gaps = non_adjacent_pairs(g1);
    if (gaps.empty()) return std::nullopt;
    const auto& edges = g1.edges();
    const Edge drop = edges[rng.uniform_int(0, static_cast<std::int64_t>(edges.size()) - 1)];
    const UndirectedEdge add = gaps[rng.uniform_int(0, static_cast<std::int64_t>(gaps.size()) - 1)];
    g2.remove_edge(drop.u, drop.v);
    g2.add_edge(add.first, add.second);
  }
  const bool equal = structural_equal(g1, g2);
  if (equal != (kind == PairKind::identical)) return std::nullopt;

  StyleSpec s1, s2;
  s1.node_radius_px = s2.node_radius_px = radius_for(n);
  s1.layout = layout_kind_from_string(c.layouts[rng.uniform_int(0, c.layouts.size() - 1)]);
  s2.layout = layout_kind_from_string(c.layouts[rng.uniform_int(0, c.layouts.size() - 1)]);
  const auto ncol = static_cast<std::int64_t>(std::size(kPairColors));
  const auto c1 = rng.uniform_int(0, ncol - 1);
  const auto c2 = (c1 + rng.uniform_int(1, ncol - 1)) % ncol;
  s1.color_scheme = ColorScheme::uniform(kPairColors[c1]);
  s2.color_scheme = ColorScheme::uniform(kPairColors[c2]);
  Positions p1 = compute_layout(g1, s1.layout, rng);
  Positions p2 = compute_layout(g2, s2.layout, rng);
  if (!well_spaced(p1, s1, true) || !well_spaced(p2, s2, true)) return std::nullopt;

  TaskInstance t;
  t.graph = std::move(g1);
  t.positions = std::move(p1);
  t.style = s1;
  t.graph2 = std::move(g2);
  t.positions2 = std::move(p2);
  t.style2 = s2;
  t.detail = kind == PairKind::identical ? "identical"
             : kind == PairKind::relabeled ? "relabeled"
                                           : "rewired";
  t.truth = MatchTruth{kind == PairKind::identical};
  return t;
}

std::string bool_word(bool b, const char* yes, const char* no) { return b ? yes : no; }

Plan plan_task(int task, const DatasetConfig& cfg) {
  Plan plan;
  const int reps = cfg.replicates;
  auto add = [&](std::string variant, auto build) {
    for (int r = 0; r < reps; ++r) plan.cells.push_back({variant, r, build});
  };
  switch (task) {
    case 1:
      for (const auto& ls : cfg.task1.layouts)
        for (bool lab : cfg.task1.labels)
          for (bool dir : cfg.task1.directed)
            for (const auto& col : cfg.task1.colors) {
              const LayoutKind lk = layout_kind_from_string(ls);
              const bool rnd = col == "random";
              std::string v = ls + "-" + bool_word(lab, "labeled", "unlabeled") + "-" +
                              bool_word(dir, "directed", "undirected") + "-" + col;
              add(v, [&cfg, lk, lab, dir, rnd](Rng& rng) { return task1_cell(cfg, lk, lab, dir, rnd, rng); });
            }
      break;
    case 2:
      for (const auto& cs : cfg.task2.classes) {
        const GraphClass cls = graph_class_from_string(cs);
        add(cs, [&cfg, cls](Rng& rng) { return task2_cell(cfg, cls, rng); });
      }
      break;
    case 3:
      for (int n : cfg.task3.node_counts)
        add("n" + std::to_string(n), [&cfg, n](Rng& rng) { return task3_cell(cfg, n, rng); });
      break;
    case 4:
      for (const auto& ks : cfg.task4.kind_sets)
        for (int total : cfg.task4.totals) {
          auto kinds = parse_kind_set(ks);
          add(ks + "/" + std::to_string(total),
              [&cfg, kinds, total](Rng& rng) { return task4_cell(cfg, kinds, total, rng); });
        }
      break;
    case 5:
      for (int n : cfg.task5.node_counts)
        add("n" + std::to_string(n), [n](Rng& rng) { return task5_cell(n, rng); });
      break;
    case 6:
      for (int n : cfg.task6.node_counts)
        add("n" + std::to_string(n), [&cfg, n](Rng& rng) { return task6_cell(cfg, n, rng); });
      break;
    case 7: {
      const int relabeled = static_cast<int>(std::ceil(cfg.task7.relabeled_fraction * reps - 1e-9));
      for (int n : cfg.task7.node_counts) {
        add("n" + std::to_string(n) + "-match",
            [&cfg, n](Rng& rng) { return task7_cell(cfg, n, PairKind::identical, rng); });
        for (int r = 0; r < reps; ++r) {
          const PairKind k = r < relabeled ? PairKind::relabeled : PairKind::rewired;
          plan.cells.push_back({"n" + std::to_string(n) + "-nomatch", r,
                                [&cfg, n, k](Rng& rng) { return task7_cell(cfg, n, k, rng); }});
        }
      }
      break;
    }
    default: throw ParameterError("task ids are 1..7");
  }
  return plan;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<TaskInstance> generate_task(int task, const DatasetConfig& cfg, const Rng& base,
                                        unsigned threads) {
  validate(cfg);
  Plan plan = plan_task(task, cfg);
  const Rng task_rng = base.fork(static_cast<std::uint64_t>(task));
  std::vector<TaskInstance> out(plan.cells.size());
  parallel_for(plan.cells.size(), threads, [&](std::size_t i) {
    const Cell& cell = plan.cells[i];
    const std::uint64_t seed =
        task_rng.fork(fnv1a(cell.variant)).fork(static_cast<std::uint64_t>(cell.replicate)).seed();
    const std::string id = "t" + std::to_string(task) + "-" + id_part(cell.variant) + "-" +
                           two_digits(cell.replicate + 1);
    std::optional<TaskInstance> inst;
    for (int attempt = 0; attempt < cfg.max_attempts && !inst; ++attempt) {
      Rng rng = Rng(seed).fork(static_cast<std::uint64_t>(attempt));
      inst = cell.build(rng);
    }
    if (!inst)
      throw GenerationError(id + ": no valid instance after " + std::to_string(cfg.max_attempts) +
                            " attempts");
    inst->instance_id = id;
    inst->task = task;
    inst->variant = cell.variant;
    inst->seed = seed;
    inst->image_path = "dataset/task" + std::to_string(task) + "/" + id + ".png";
    inst->svg_path = "dataset/task" + std::to_string(task) + "/" + id + ".svg";
    auto problems = verify_truth(*inst);
    if (!problems.empty()) throw GenerationError(id + ": oracle disagreement: " + problems.front());
    out[i] = std::move(*inst);
  });
  return out;
}

RenderedImage render_instance(const TaskInstance& inst) {
  if (inst.task == 7) {
    if (!inst.graph2) throw ParameterError(inst.instance_id + ": pair instance without a second graph");
    return render_pair(inst.graph, inst.positions, inst.style, *inst.graph2, inst.positions2,
                       inst.style2.value_or(inst.style));
  }
  return render_graph(inst.graph, inst.positions, inst.style);
}

std::vector<std::string> verify_truth(const TaskInstance& inst) {
  std::vector<std::string> problems;
  auto fail = [&](const std::string& m) { problems.push_back(inst.instance_id + ": " + m); };
  if (task_of(inst.truth) != inst.task) {
    fail("truth kind does not match task");
    return problems;
  }
  const Graph& g = inst.graph;
  if (inst.positions.size() != static_cast<std::size_t>(g.node_count())) fail("positions do not match graph");
  try {
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, CountsTruth>) {
            if (t.nodes != g.node_count() || t.edges != static_cast<int>(g.edge_count()))
              fail("element counts differ");
          } else if constexpr (std::is_same_v<T, ClassTruth>) {
            if (!classify_check(g, t.cls)) fail("graph is not " + std::string(to_string(t.cls)));
          } else if constexpr (std::is_same_v<T, CutEdgeTruth>) {
            if (find_bridges(g) != std::vector<UndirectedEdge>{{t.u, t.v}})
              fail("cut edge is not the unique bridge");
          } else if constexpr (std::is_same_v<T, CensusTruth>) {
            if (component_census(g) != t.census) fail("pattern census differs");
          } else if constexpr (std::is_same_v<T, MissingEdgeTruth>) {
            if (non_adjacent_pairs(g) != std::vector<UndirectedEdge>{{t.u, t.v}})
              fail("missing edge is not the only non-adjacent pair");
          } else if constexpr (std::is_same_v<T, PathTruth>) {
            auto p = shortest_path(g, t.source, t.target);
            if (!p || *p != t.path) fail("shortest path differs");
          } else {
            if (!inst.graph2)
              fail("no second graph");
            else if (structural_equal(g, *inst.graph2) != t.match)
              fail("match verdict differs");
          }
        },
        inst.truth);
  } catch (const std::exception& e) {
    fail(std::string("oracle error: ") + e.what());
  }
  return problems;
}

std::filesystem::path manifest_path(const std::filesystem::path& root) {
  return root / "dataset" / "manifest.jsonl";
}

std::vector<TaskInstance> generate_dataset(const DatasetConfig& cfg, const std::filesystem::path& root,
                                           unsigned threads) {
  validate(cfg);
  const Rng base(cfg.seed);
  std::vector<TaskInstance> all;
  for (int task : cfg.tasks) {
    auto part = generate_task(task, cfg, base, threads);
    std::error_code ec;
    const auto dir = root / "dataset" / ("task" + std::to_string(task));
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    for (auto& p : part) all.push_back(std::move(p));
  }
  parallel_for(all.size(), threads, [&](std::size_t i) {
    auto& inst = all[i];
    RenderedImage img = render_instance(inst);
    inst.image_hash = img.content_hash;
    write_file(root / inst.image_path, encode_png(img.raster));
    write_file(root / inst.svg_path, img.svg);
  });
  write_manifest(manifest_path(root), all);
  return all;
}

VerifyReport verify_dataset(const std::vector<TaskInstance>& manifest, const std::filesystem::path& root,
                            unsigned threads) {
  VerifyReport report;
  std::mutex m;
  std::vector<std::vector<std::string>> found(manifest.size());
  parallel_for(manifest.size(), threads, [&](std::size_t i) {
    const auto& inst = manifest[i];
    auto& out = found[i];
    out = verify_truth(inst);
    try {
      const auto img = render_instance(inst);
      if (img.content_hash != inst.image_hash) out.push_back(inst.instance_id + ": re-render hash differs");
      const auto raster = decode_png(read_file_bytes(root / inst.image_path));
      if (raster_hash(raster) != inst.image_hash)
        out.push_back(inst.instance_id + ": image file does not match its recorded hash");
    } catch (const std::exception& e) {
      out.push_back(inst.instance_id + ": " + e.what());
    }
  });
  report.checked = manifest.size();
  for (auto& f : found)
    for (auto& p : f) report.problems.push_back(std::move(p));
  return report;
}

}  // namespace gvb
