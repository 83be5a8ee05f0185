#include "gvb/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gvb/errors.hpp"

namespace gvb {

Graph random_graph(int n, double p, bool directed, std::optional<WeightRange> weights, Rng& rng) {
  if (n < 1) throw ParameterError("random_graph: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("random_graph: p must lie in [0,1]");
  if (weights && weights->min > weights->max)
    throw ParameterError("random_graph: empty weight range");
  Graph g(n, directed);
  if (weights) g.set_weight_range(*weights);
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      if (!rng.bernoulli(p)) continue;
      std::optional<int> w;
      if (weights) w = static_cast<int>(rng.uniform_int(weights->min, weights->max));
      g.add_edge(i, j, w);
    }
  }
  return g;
}

namespace {

Graph make_tree(int n, Rng& rng) {
  Graph g(n, false);
  if (n <= 1) return g;
  if (n == 2) {
    g.add_edge(0, 1);
    return g;
  }
  // Pruefer decoding.
  std::vector<int> code(static_cast<std::size_t>(n - 2));
  for (auto& c : code) c = static_cast<int>(rng.uniform_int(0, n - 1));
  std::vector<int> degree(static_cast<std::size_t>(n), 1);
  for (int c : code) ++degree[c];
  for (int c : code) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    g.add_edge(std::min(leaf, c), std::max(leaf, c));
    --degree[leaf];
    --degree[c];
  }
  int a = -1, b = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) (a < 0 ? a : b) = v;
  }
  g.add_edge(a, b);
  return g;
}

Graph make_complete(int n) {
  Graph g(n, false);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph make_bipartite(int n, Rng& rng) {
  if (n < 2) throw ParameterError("typed_graph(bipartite): needs at least 2 nodes");
  const int a = static_cast<int>(rng.uniform_int(1, n - 1));
  Graph g(n, false);
  for (int i = 0; i < a; ++i)
    for (int j = a; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph make_mesh(const TypedGraphParams& params, Rng& rng) {
  int rows = 0, cols = 0;
  if (params.rows || params.cols) {
    if (!params.rows || !params.cols)
      throw ParameterError("typed_graph(mesh): give both rows and cols");
    rows = *params.rows;
    cols = *params.cols;
  } else {
    std::vector<std::array<int, 2>> dims;
    for (int r = 2; r * r <= params.nodes; ++r)
      for (int c = r; r * c <= params.nodes; ++c) dims.push_back({r, c});
    if (dims.empty())
      throw ParameterError("typed_graph(mesh): node bound below a 2x2 grid");
    auto pick = dims[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(dims.size()) - 1))];
    rows = pick[0];
    cols = pick[1];
    if (rng.bernoulli(0.5)) std::swap(rows, cols);
  }
  if (rows < 2 || cols < 2) throw ParameterError("typed_graph(mesh): dims must be at least 2x2");
  Graph g(rows * cols, false);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) g.add_edge(v, v + 1);
      if (r + 1 < rows) g.add_edge(v, v + cols);
    }
  }
  g.set_mesh_certificate({rows, cols});
  return g;
}

Graph make_planar(const TypedGraphParams& params, Rng& rng) {
  const int n = params.nodes;
  if (n < 1) throw ParameterError("typed_graph(planar): needs at least 1 node");
  std::vector<Point> pos;
  Graph g(n, false);
  if (n == 1) {
    pos.push_back({0.5, 0.5});
  } else if (n == 2) {
    pos = {{0.0, 0.0}, {1.0, 0.0}};
    g.add_edge(0, 1);
  } else {
    pos = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    std::vector<std::array<int, 3>> faces{{0, 1, 2}};
    for (int v = 3; v < n; ++v) {
      const auto fi = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(faces.size()) - 1));
      const auto f = faces[fi];
      double w[3];
      double total = 0.0;
      for (double& x : w) {
        x = rng.uniform(0.25, 1.0);
        total += x;
      }
      Point p{0.0, 0.0};
      for (int k = 0; k < 3; ++k) {
        p.x += w[k] / total * pos[f[k]].x;
        p.y += w[k] / total * pos[f[k]].y;
      }
      pos.push_back(p);
      for (int k = 0; k < 3; ++k) g.add_edge(f[k], v);
      faces[fi] = {f[0], f[1], v};
      faces.push_back({f[1], f[2], v});
      faces.push_back({f[0], f[2], v});
    }
    // Deleting edges keeps a straight-line drawing crossing free.
    auto order = rng.permutation(static_cast<int>(g.edge_count()));
    const auto edges = g.edges();
    for (int idx : order) {
      if (!rng.bernoulli(params.planar_thinning)) continue;
      const Edge e = edges[static_cast<std::size_t>(idx)];
      g.remove_edge(e.u, e.v);
      if (!is_connected(g)) g.add_edge(e.u, e.v);
    }
  }
  g.set_planar_certificate({std::move(pos)});
  return g;
}

// Spanning forward edges plus random extra forward edges over a random
// topological order.
Graph make_dag(int n, double p, Rng& rng, std::vector<int>& order) {
  Graph g(n, true);
  order = rng.permutation(n);
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(rng.uniform_int(0, i - 1));
    g.add_edge(order[j], order[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.has_edge(order[i], order[j]) && rng.bernoulli(p)) g.add_edge(order[i], order[j]);
  return g;
}

Graph make_cyclic(int n, double p, Rng& rng) {
  if (n < 3) throw ParameterError("typed_graph(cyclic): needs at least 3 nodes");
  std::vector<int> order;
  Graph g = make_dag(n, p, rng, order);
  std::vector<int> picks = rng.permutation(n);
  picks.resize(3);
  std::sort(picks.begin(), picks.end());
  const int a = order[picks[0]], b = order[picks[1]], c = order[picks[2]];
  if (!g.has_edge(a, b)) g.add_edge(a, b);
  if (!g.has_edge(b, c)) g.add_edge(b, c);
  g.add_edge(c, a);
  return g;
}

}  // namespace

Graph typed_graph(GraphClass cls, const TypedGraphParams& params, Rng& rng) {
  if (cls != GraphClass::mesh && params.nodes < 1)
    throw ParameterError("typed_graph: node count must be >= 1");
  if (!(params.edge_probability >= 0.0 && params.edge_probability <= 1.0))
    throw ParameterError("typed_graph: edge probability must lie in [0,1]");
  switch (cls) {
    case GraphClass::tree:
      return make_tree(params.nodes, rng);
    case GraphClass::complete:
      return make_complete(params.nodes);
    case GraphClass::bipartite:
      return make_bipartite(params.nodes, rng);
    case GraphClass::mesh:
      return make_mesh(params, rng);
    case GraphClass::planar:
      return make_planar(params, rng);
    case GraphClass::acyclic: {
      std::vector<int> order;
      return make_dag(params.nodes, params.edge_probability, rng, order);
    }
    case GraphClass::cyclic:
      return make_cyclic(params.nodes, params.edge_probability, rng);
  }
  throw ParameterError("typed_graph: unknown class");
}

namespace {
constexpr std::string_view kPatternNames[] = {"chain", "clique", "star"};
}

std::string_view to_string(PatternKind k) { return kPatternNames[static_cast<int>(k)]; }

std::optional<PatternKind> try_pattern_kind(std::string_view name) {
  for (int i = 0; i < 3; ++i)
    if (kPatternNames[i] == name) return static_cast<PatternKind>(i);
  return std::nullopt;
}

Graph pattern_graph(const std::vector<PatternSpec>& census, Rng& rng) {
  if (census.empty()) throw ParameterError("pattern_graph: empty census");
  int total = 0;
  for (const auto& s : census) {
    const int min_size = s.kind == PatternKind::chain ? 2 : 3;
    if (s.size < min_size)
      throw ParameterError("pattern_graph: " + std::string(to_string(s.kind)) + " needs at least " +
                           std::to_string(min_size) + " nodes");
    total += s.size;
  }
  std::vector<PatternSpec> order = census;
  rng.shuffle(order);
  Graph g(total, false);
  int base = 0;
  for (const auto& s : order) {
    switch (s.kind) {
      case PatternKind::chain:
        for (int i = 0; i + 1 < s.size; ++i) g.add_edge(base + i, base + i + 1);
        break;
      case PatternKind::clique:
        for (int i = 0; i < s.size; ++i)
          for (int j = i + 1; j < s.size; ++j) g.add_edge(base + i, base + j);
        break;
      case PatternKind::star:
        for (int i = 1; i < s.size; ++i) g.add_edge(base, base + i);
        break;
    }
    base += s.size;
  }
  return g;
}

}  // namespace gvb
