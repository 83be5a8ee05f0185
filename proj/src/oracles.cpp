#include "gvb/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <tuple>

#include "gvb/errors.hpp"

namespace gvb {

std::vector<UndirectedEdge> find_bridges(const Graph& g) {
  if (g.directed()) throw UnsupportedInput("find_bridges: directed graphs are not supported");
  const int n = g.node_count();
  const auto adj = g.undirected_adjacency();
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<UndirectedEdge> bridges;
  int clock = 0;
  // Simple graph: skipping the parent vertex once is equivalent to skipping the tree edge.
  std::function<void(NodeId, NodeId)> dfs = [&](NodeId u, NodeId parent) {
    disc[u] = low[u] = clock++;
    for (NodeId v : adj[u]) {
      if (v == parent) continue;
      if (disc[v] < 0) {
        dfs(v, u);
        low[u] = std::min(low[u], low[v]);
        if (low[v] > disc[u]) bridges.emplace_back(std::min(u, v), std::max(u, v));
      } else {
        low[u] = std::min(low[u], disc[v]);
      }
    }
  };
  for (NodeId s = 0; s < n; ++s)
    if (disc[s] < 0) dfs(s, -1);
  std::sort(bridges.begin(), bridges.end());
  return bridges;
}

std::optional<PathResult> shortest_path(const Graph& g, NodeId source, NodeId target) {
  const int n = g.node_count();
  if (source < 0 || source >= n || target < 0 || target >= n)
    throw ParameterError("shortest_path: endpoint out of range");
  struct Arc {
    NodeId to;
    long long w;
  };
  std::vector<std::vector<Arc>> out(static_cast<std::size_t>(n)), in(static_cast<std::size_t>(n));
  for (const auto& e : g.edges()) {
    const long long w = e.weight.value_or(1);
    if (w < 0) throw ParameterError("shortest_path: negative weight");
    out[e.u].push_back({e.v, w});
    in[e.v].push_back({e.u, w});
    if (!g.directed()) {
      out[e.v].push_back({e.u, w});
      in[e.u].push_back({e.v, w});
    }
  }
  // Distances to the target over reversed arcs.
  constexpr long long kInf = std::numeric_limits<long long>::max();
  std::vector<long long> dist(static_cast<std::size_t>(n), kInf);
  using Item = std::pair<long long, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[target] = 0;
  pq.push({0, target});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    for (const auto& a : in[u]) {
      if (d + a.w < dist[a.to]) {
        dist[a.to] = d + a.w;
        pq.push({dist[a.to], a.to});
      }
    }
  }
  if (dist[source] == kInf) return std::nullopt;

  // Tight arcs (w + dist[v] == dist[u]) are exactly the arcs used by
  // minimum-weight paths. Walk greedily to the smallest tight neighbour from
  // which the target stays reachable without revisiting the prefix.
  std::vector<std::vector<NodeId>> tight(static_cast<std::size_t>(n));
  for (NodeId u = 0; u < n; ++u) {
    if (dist[u] == kInf) continue;
    for (const auto& a : out[u])
      if (dist[a.to] != kInf && a.w + dist[a.to] == dist[u]) tight[u].push_back(a.to);
    std::sort(tight[u].begin(), tight[u].end());
    tight[u].erase(std::unique(tight[u].begin(), tight[u].end()), tight[u].end());
  }
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  auto reaches_target = [&](NodeId from) {
    std::vector<char> seen = used;
    std::vector<NodeId> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      if (u == target) return true;
      for (NodeId v : tight[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    return false;
  };

  PathResult result;
  NodeId cur = source;
  used[cur] = 1;
  result.nodes.push_back(cur);
  while (cur != target) {
    NodeId next = -1;
    for (NodeId v : tight[cur]) {
      if (used[v]) continue;
      if (reaches_target(v)) {
        next = v;
        break;
      }
    }
    if (next < 0) throw std::logic_error("shortest_path: tight subgraph lost the target");
    result.total_weight += dist[cur] - dist[next];
    cur = next;
    used[cur] = 1;
    result.nodes.push_back(cur);
  }
  return result;
}

bool has_cycle(const Graph& g) {
  const int n = g.node_count();
  if (!g.directed()) {
    int components = 0;
    connected_components(g, &components);
    return static_cast<int>(g.edge_count()) > n - components;
  }
  const auto adj = g.out_adjacency();
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges()) ++indeg[e.v];
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  int removed = 0;
  while (!ready.empty()) {
    NodeId u = ready.back();
    ready.pop_back();
    ++removed;
    for (NodeId v : adj[u])
      if (--indeg[v] == 0) ready.push_back(v);
  }
  return removed != n;
}

bool is_two_colorable(const Graph& g) {
  const int n = g.node_count();
  const auto adj = g.undirected_adjacency();
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  for (NodeId s = 0; s < n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::queue<NodeId> q;
    q.push(s);
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      for (NodeId v : adj[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          q.push(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point p, Point a, Point b, double eps) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  if (len == 0.0) return std::hypot(p.x - a.x, p.y - a.y) <= eps;
  if (std::abs(cross(a, b, p)) / len > eps) return false;
  const double t = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / (len * len);
  return t > 0.0 && t < 1.0;
}

bool segments_intersect(Point a, Point b, Point c, Point d, double eps) {
  const double d1 = cross(c, d, a), d2 = cross(c, d, b);
  const double d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  return on_segment(a, c, d, eps) || on_segment(b, c, d, eps) || on_segment(c, a, b, eps) ||
         on_segment(d, a, b, eps);
}

}  // namespace

bool crossing_free(const Graph& g, const std::vector<Point>& pos) {
  if (static_cast<int>(pos.size()) != g.node_count()) return false;
  constexpr double kEps = 1e-9;
  for (NodeId a = 0; a < g.node_count(); ++a)
    for (NodeId b = a + 1; b < g.node_count(); ++b)
      if (std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y) <= kEps) return false;
  // Edges as unordered pairs; a reciprocal directed pair is drawn once.
  std::set<UndirectedEdge> unique;
  for (const auto& e : g.edges()) unique.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
  const std::vector<UndirectedEdge> edges(unique.begin(), unique.end());
  for (const auto& [u, v] : edges)
    for (NodeId w = 0; w < g.node_count(); ++w)
      if (w != u && w != v && on_segment(pos[w], pos[u], pos[v], kEps)) return false;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const auto [a, b] = edges[i];
      const auto [c, d] = edges[j];
      if (a == c || a == d || b == c || b == d) continue;
      if (segments_intersect(pos[a], pos[b], pos[c], pos[d], kEps)) return false;
    }
  }
  return true;
}

bool classify_check(const Graph& g, GraphClass cls) {
  const int n = g.node_count();
  const auto m = static_cast<long long>(g.edge_count());
  switch (cls) {
    case GraphClass::tree:
      return !g.directed() && n >= 1 && m == n - 1 && is_connected(g);
    case GraphClass::complete:
      return !g.directed() && m == static_cast<long long>(n) * (n - 1) / 2;
    case GraphClass::bipartite:
      return is_two_colorable(g);
    case GraphClass::cyclic:
      return has_cycle(g);
    case GraphClass::acyclic:
      return !has_cycle(g);
    case GraphClass::mesh: {
      const auto& cert = g.mesh_certificate();
      if (!cert || g.directed() || cert->rows < 2 || cert->cols < 2) return false;
      if (cert->rows * cert->cols != n) return false;
      const long long expected = 2LL * cert->rows * cert->cols - cert->rows - cert->cols;
      if (m != expected) return false;
      for (int r = 0; r < cert->rows; ++r) {
        for (int c = 0; c < cert->cols; ++c) {
          const int v = r * cert->cols + c;
          if (c + 1 < cert->cols && !g.has_edge(v, v + 1)) return false;
          if (r + 1 < cert->rows && !g.has_edge(v, v + cert->cols)) return false;
        }
      }
      return true;
    }
    case GraphClass::planar: {
      const auto& cert = g.planar_certificate();
      return cert && crossing_free(g, cert->positions);
    }
  }
  return false;
}

PatternCensus component_census(const Graph& g) {
  int count = 0;
  const auto comp = connected_components(g, &count);
  const auto adj = g.undirected_adjacency();
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(count));
  for (NodeId v = 0; v < g.node_count(); ++v) members[comp[v]].push_back(v);
  PatternCensus census;
  for (int c = 0; c < count; ++c) {
    const auto& nodes = members[c];
    const long long k = static_cast<long long>(nodes.size());
    long long edges = 0;
    int max_deg = 0, deg1 = 0;
    for (NodeId v : nodes) {
      const int d = static_cast<int>(adj[v].size());
      edges += d;
      max_deg = std::max(max_deg, d);
      if (d == 1) ++deg1;
    }
    edges /= 2;
    if (k >= 3 && edges == k * (k - 1) / 2) {
      ++census[PatternKind::clique];
    } else if (k >= 4 && edges == k - 1 && max_deg == k - 1 && deg1 == k - 1) {
      ++census[PatternKind::star];
    } else if (k >= 2 && edges == k - 1 && max_deg <= 2) {
      ++census[PatternKind::chain];
    } else {
      throw ClassificationError("component_census: component containing node " +
                                std::to_string(nodes.front()) + " (" + std::to_string(k) +
                                " nodes, " + std::to_string(edges) +
                                " edges) is not a chain, clique or star");
    }
  }
  return census;
}

bool structural_equal(const Graph& a, const Graph& b) {
  if (!a.labels() || !b.labels())
    throw UnsupportedInput("structural_equal: both graphs must be labeled");
  if (a.node_count() != b.node_count() || a.directed() != b.directed()) return false;
  auto sorted_labels = [](const Graph& g) {
    auto l = *g.labels();
    std::sort(l.begin(), l.end());
    return l;
  };
  if (sorted_labels(a) != sorted_labels(b)) return false;
  using Key = std::tuple<std::string, std::string, std::optional<int>>;
  auto keyed = [](const Graph& g) {
    std::multiset<Key> s;
    for (const auto& e : g.edges()) {
      std::string x = g.label_of(e.u), y = g.label_of(e.v);
      if (!g.directed() && y < x) std::swap(x, y);
      s.insert({x, y, e.weight});
    }
    return s;
  };
  return keyed(a) == keyed(b);
}

std::vector<UndirectedEdge> non_adjacent_pairs(const Graph& g) {
  std::vector<UndirectedEdge> out;
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v = u + 1; v < g.node_count(); ++v)
      if (!g.has_edge(u, v) && !g.has_edge(v, u)) out.emplace_back(u, v);
  return out;
}

}  // namespace gvb
