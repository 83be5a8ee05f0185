#include "gvb/graph.hpp"

#include <algorithm>
#include <numeric>

#include "gvb/errors.hpp"

namespace gvb {

Graph::Graph(int node_count, bool directed) : node_count_(node_count), directed_(directed) {
  if (node_count < 0) throw ParameterError("graph: negative node count");
  present_.assign(static_cast<std::size_t>(node_count) * static_cast<std::size_t>(node_count), 0);
}

std::size_t Graph::slot(NodeId u, NodeId v) const {
  if (!directed_ && u > v) std::swap(u, v);
  return static_cast<std::size_t>(u) * static_cast<std::size_t>(node_count_) +
         static_cast<std::size_t>(v);
}

void Graph::add_edge(NodeId u, NodeId v, std::optional<int> weight) {
  if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_)
    throw ParameterError("graph: endpoint out of range (" + std::to_string(u) + "," +
                         std::to_string(v) + ")");
  if (u == v) throw ParameterError("graph: self loop on node " + std::to_string(u));
  if (present_[slot(u, v)])
    throw ParameterError("graph: duplicate edge (" + std::to_string(u) + "," + std::to_string(v) +
                         ")");
  if (weight && weight_range_ && (*weight < weight_range_->min || *weight > weight_range_->max))
    throw ParameterError("graph: weight " + std::to_string(*weight) + " outside declared range");
  present_[slot(u, v)] = 1;
  edges_.push_back({u, v, weight});
}

bool Graph::remove_edge(NodeId u, NodeId v) {
  if (!has_edge(u, v)) return false;
  present_[slot(u, v)] = 0;
  auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return (e.u == u && e.v == v) || (!directed_ && e.u == v && e.v == u);
  });
  edges_.erase(it);
  return true;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u < 0 || v < 0 || u >= node_count_ || v >= node_count_ || u == v) return false;
  return present_[slot(u, v)] != 0;
}

std::optional<int> Graph::weight(NodeId u, NodeId v) const {
  for (const auto& e : edges_) {
    if ((e.u == u && e.v == v) || (!directed_ && e.u == v && e.v == u)) return e.weight;
  }
  return std::nullopt;
}

std::vector<std::vector<NodeId>> Graph::undirected_adjacency() const {
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(node_count_));
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

std::vector<std::vector<NodeId>> Graph::out_adjacency() const {
  if (!directed_) return undirected_adjacency();
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(node_count_));
  for (const auto& e : edges_) adj[e.u].push_back(e.v);
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(static_cast<std::size_t>(node_count_), 0);
  for (const auto& e : edges_) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

void Graph::set_labels(std::vector<std::string> labels) {
  if (static_cast<int>(labels.size()) != node_count_)
    throw ParameterError("graph: label count does not match node count");
  labels_ = std::move(labels);
}

void Graph::set_index_labels() {
  std::vector<std::string> l;
  l.reserve(static_cast<std::size_t>(node_count_));
  for (int i = 0; i < node_count_; ++i) l.push_back(std::to_string(i));
  labels_ = std::move(l);
}

std::string Graph::label_of(NodeId v) const {
  if (labels_) return (*labels_)[static_cast<std::size_t>(v)];
  return std::to_string(v);
}

void Graph::set_weight_range(WeightRange r) {
  if (r.min > r.max) throw ParameterError("graph: empty weight range");
  for (const auto& e : edges_)
    if (e.weight && (*e.weight < r.min || *e.weight > r.max))
      throw ParameterError("graph: existing weight outside new range");
  weight_range_ = r;
}

void Graph::set_planar_certificate(PlanarCertificate p) {
  if (static_cast<int>(p.positions.size()) != node_count_)
    throw ParameterError("graph: planar certificate size mismatch");
  planar_ = std::move(p);
}

Graph Graph::permuted(const std::vector<NodeId>& perm) const {
  if (static_cast<int>(perm.size()) != node_count_)
    throw ParameterError("graph: permutation size mismatch");
  Graph out(node_count_, directed_);
  if (weight_range_) out.set_weight_range(*weight_range_);
  for (const auto& e : edges_) out.add_edge(perm[e.u], perm[e.v], e.weight);
  if (labels_) out.labels_ = labels_;
  return out;
}

namespace {
constexpr std::string_view kClassNames[] = {"acyclic", "cyclic", "bipartite", "complete",
                                            "mesh",    "planar", "tree"};
}

std::string_view to_string(GraphClass c) { return kClassNames[static_cast<int>(c)]; }

std::optional<GraphClass> try_graph_class(std::string_view name) {
  for (int i = 0; i < 7; ++i)
    if (kClassNames[i] == name) return static_cast<GraphClass>(i);
  return std::nullopt;
}

GraphClass graph_class_from_string(std::string_view name) {
  if (auto c = try_graph_class(name)) return *c;
  throw ParameterError("unknown graph class: " + std::string(name));
}

nlohmann::json to_json(const Graph& g) {
  nlohmann::json j;
  j["node_count"] = g.node_count();
  j["directed"] = g.directed();
  j["labels"] = g.labels() ? nlohmann::json(*g.labels()) : nlohmann::json(nullptr);
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    if (e.weight)
      edges.push_back({e.u, e.v, *e.weight});
    else
      edges.push_back({e.u, e.v});
  }
  j["edges"] = std::move(edges);
  if (g.weight_range()) j["weight_range"] = {g.weight_range()->min, g.weight_range()->max};
  if (g.mesh_certificate())
    j["mesh"] = {{"rows", g.mesh_certificate()->rows}, {"cols", g.mesh_certificate()->cols}};
  if (g.planar_certificate()) {
    auto pts = nlohmann::json::array();
    for (const auto& p : g.planar_certificate()->positions) pts.push_back({p.x, p.y});
    j["planar_embedding"] = std::move(pts);
  }
  return j;
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    const int n = j.contains("node_count")
                      ? j.at("node_count").get<int>()
                      : static_cast<int>(j.at("labels").size());
    Graph g(n, j.at("directed").get<bool>());
    if (j.contains("weight_range")) {
      const auto& r = j.at("weight_range");
      g.set_weight_range({r.at(0).get<int>(), r.at(1).get<int>()});
    }
    for (const auto& e : j.at("edges")) {
      std::optional<int> w;
      if (e.size() > 2) w = e.at(2).get<int>();
      g.add_edge(e.at(0).get<int>(), e.at(1).get<int>(), w);
    }
    if (j.contains("labels") && !j.at("labels").is_null())
      g.set_labels(j.at("labels").get<std::vector<std::string>>());
    if (j.contains("mesh"))
      g.set_mesh_certificate({j["mesh"].at("rows").get<int>(), j["mesh"].at("cols").get<int>()});
    if (j.contains("planar_embedding")) {
      PlanarCertificate c;
      for (const auto& p : j.at("planar_embedding"))
        c.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      g.set_planar_certificate(std::move(c));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("graph json: ") + e.what());
  }
}

std::vector<int> connected_components(const Graph& g, int* count) {
  const int n = g.node_count();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  const auto adj = g.undirected_adjacency();
  int c = 0;
  std::vector<NodeId> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adj[u]) {
        if (comp[v] < 0) {
          comp[v] = c;
          stack.push_back(v);
        }
      }
    }
    ++c;
  }
  if (count) *count = c;
  return comp;
}

bool is_connected(const Graph& g) {
  int c = 0;
  connected_components(g, &c);
  return c <= 1;
}

}  // namespace gvb
