#include "gvb/mock_backend.hpp"

#include <chrono>
#include <thread>

#include "gvb/errors.hpp"
#include "gvb/manifest.hpp"

namespace gvb {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json label_value(const Graph& g, NodeId v) {
  const std::string l = g.label_of(v);
  try {
    std::size_t used = 0;
    const int n = std::stoi(l, &used);
    if (used == l.size()) return n;
  } catch (const std::exception&) {
  }
  return l;
}

/// Uniform node other than u and v (n >= 3).
NodeId other_node(NodeId u, NodeId v, int n, Rng& rng) {
  for (;;) {
    const auto w = static_cast<NodeId>(rng.uniform_int(0, n - 1));
    if (w != u && w != v) return w;
  }
}

std::string pattern_names(const PatternCensus& c) {
  std::string s;
  for (auto [k, n] : c)
    if (n > 0) s += (s.empty() ? "" : ", ") + std::string(to_string(k));
  return s;
}

}  // namespace

ChatReply MockBackend::send(const ChatRequest& request) {
  ++requests_;
  const std::string id = request.instance ? request.instance->instance_id : "";
  int seen = 0;
  {
    std::lock_guard lock(counts_mutex_);
    seen = counts_[id]++;
  }
  const int now = ++in_flight_;
  for (int peak = max_in_flight_; now > peak && !max_in_flight_.compare_exchange_weak(peak, now);) {
  }
  if (delay_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
  ChatReply reply;
  if (seen < transient_failures_) {
    reply.http_status = 503;
    reply.text = "service unavailable";
  } else if (!request.instance) {
    reply.http_status = 400;
  } else {
    reply.http_status = 200;
    reply.text = answer(request);
  }
  --in_flight_;
  return reply;
}

std::map<std::string, int> MockBackend::request_counts() const {
  std::lock_guard lock(counts_mutex_);
  return counts_;
}

std::string oracle_answer(const TaskInstance& inst) {
  const Graph& g = inst.graph;
  json a = std::visit(
      [&](const auto& t) -> json {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, CountsTruth>) {
          return {{"total_nodes", t.nodes}, {"total_edges", t.edges}};
        } else if constexpr (std::is_same_v<T, ClassTruth>) {
          return {{"type_graph", std::string(to_string(t.cls))}};
        } else if constexpr (std::is_same_v<T, CutEdgeTruth>) {
          return {{"cut_edge", "(" + g.label_of(t.u) + ", " + g.label_of(t.v) + ")"}};
        } else if constexpr (std::is_same_v<T, CensusTruth>) {
          int total = 0;
          for (auto [k, n] : t.census) total += n;
          return {{"pattern", pattern_names(t.census)}, {"number_of_patterns", total}};
        } else if constexpr (std::is_same_v<T, MissingEdgeTruth>) {
          return {{"nodes_prediction", {label_value(g, t.u), label_value(g, t.v)}}};
        } else if constexpr (std::is_same_v<T, PathTruth>) {
          json p = json::array();
          for (NodeId v : t.path.nodes) p.push_back(g.label_of(v));
          return {{"shortest_path", p}};
        } else {
          return {{"match", t.match ? "yes" : "no"}};
        }
      },
      inst.truth);
  a["analysis"] = "Answer derived from the ground truth.";
  return a.dump(3);
}

std::string OracleBackend::answer(const ChatRequest& request) { return oracle_answer(*request.instance); }

std::string NoisyBackend::answer(const ChatRequest& request) {
  const TaskInstance& inst = *request.instance;
  Rng rng = Rng(params_.seed).fork(fnv1a(inst.instance_id)).fork(fnv1a(request.prompt));
  const Graph& g = inst.graph;
  const int n = g.node_count();
  json a = json::parse(oracle_answer(inst));
  const bool flip = rng.bernoulli(params_.flip_probability);
  switch (inst.task) {
    case 1: {
      const auto& t = std::get<CountsTruth>(inst.truth);
      a["total_nodes"] = std::max<long long>(0, t.nodes + rng.uniform_int(-params_.node_error, params_.node_error));
      a["total_edges"] = std::max<long long>(0, t.edges + rng.uniform_int(-params_.edge_error, params_.edge_error));
      break;
    }
    case 2:
      if (flip) {
        const auto& t = std::get<ClassTruth>(inst.truth);
        auto other = static_cast<GraphClass>((static_cast<int>(t.cls) + rng.uniform_int(1, 6)) % 7);
        a["type_graph"] = std::string(to_string(other));
      }
      break;
    case 3:
      if (flip) {
        const auto& t = std::get<CutEdgeTruth>(inst.truth);
        a["cut_edge"] = "(" + g.label_of(t.u) + ", " + g.label_of(other_node(t.u, t.v, n, rng)) + ")";
      }
      break;
    case 4:
      if (flip) a["number_of_patterns"] = a["number_of_patterns"].get<int>() + 1;
      break;
    case 5:
      if (flip) {
        const auto& t = std::get<MissingEdgeTruth>(inst.truth);
        const NodeId w = other_node(t.u, t.v, n, rng);
        a["nodes_prediction"] = {label_value(g, t.u), label_value(g, w)};
      }
      break;
    case 6:
      if (flip) {
        auto p = a["shortest_path"];
        if (p.size() > 2)
          p.erase(p.begin() + 1);
        else
          p.insert(p.begin() + 1, g.label_of(static_cast<NodeId>(rng.uniform_int(0, n - 1))));
        a["shortest_path"] = p;
      }
      break;
    case 7:
      if (flip) a["match"] = a["match"] == "yes" ? "no" : "yes";
      break;
    default: break;
  }
  return a.dump(3);
}

FixtureBackend::FixtureBackend(const std::filesystem::path& file) {
  if (!std::filesystem::is_regular_file(file)) throw ConfigError("fixture file not found: " + file.string());
  for (const auto& j : read_jsonl(file)) {
    if (!j.is_object() || !j.contains("text") || !j.at("text").is_string())
      throw ConfigError(file.string() + ": every fixture entry needs a text string");
    const std::string text = j.at("text").get<std::string>();
    if (j.contains("instance_id"))
      by_id_[j.at("instance_id").get<std::string>()] = text;
    else if (j.contains("task"))
      by_task_[j.at("task").get<int>()].push_back(text);
    else
      throw ConfigError(file.string() + ": fixture entry needs instance_id or task");
  }
}

std::string FixtureBackend::answer(const ChatRequest& request) {
  const TaskInstance& inst = *request.instance;
  if (auto it = by_id_.find(inst.instance_id); it != by_id_.end()) return it->second;
  if (auto it = by_task_.find(inst.task); it != by_task_.end() && !it->second.empty())
    return it->second[fnv1a(inst.instance_id) % it->second.size()];
  return "";
}

std::unique_ptr<MockBackend> make_mock_backend(const std::string& spec) {
  if (spec == "oracle") return std::make_unique<OracleBackend>();
  if (spec == "noisy") return std::make_unique<NoisyBackend>();
  if (spec.starts_with("noisy:")) {
    NoiseParams p;
    try {
      p.seed = std::stoull(spec.substr(6));
    } catch (const std::exception&) {
      throw ConfigError("bad noisy seed in '" + spec + "'");
    }
    return std::make_unique<NoisyBackend>(p);
  }
  if (spec.starts_with("fixture:")) return std::make_unique<FixtureBackend>(spec.substr(8));
  throw ConfigError("unknown mock backend '" + spec + "' (oracle, noisy, fixture:<path>)");
}

}  // namespace gvb
