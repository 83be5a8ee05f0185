#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gvb/generators.hpp"
#include "gvb/graph.hpp"

namespace gvb {

using UndirectedEdge = std::pair<NodeId, NodeId>;  // first < second

/// Kind -> number of components of that kind.
using PatternCensus = std::map<PatternKind, int>;

struct PathResult {
  std::vector<NodeId> nodes;
  long long total_weight = 0;

  friend bool operator==(const PathResult&, const PathResult&) = default;
};

/// Bridges of an undirected graph, sorted, each as (min, max).
/// Throws UnsupportedInput for directed graphs.
std::vector<UndirectedEdge> find_bridges(const Graph& g);

/// Minimum-weight path (missing weights count as 1). Among minimum-weight
/// simple paths the lexicographically smallest node sequence is returned.
/// std::nullopt when the target is unreachable.
std::optional<PathResult> shortest_path(const Graph& g, NodeId source, NodeId target);

/// Class predicate. Mesh and planar rely on the graph's construction
/// certificate (a planar certificate is checked to be crossing free).
bool classify_check(const Graph& g, GraphClass cls);

bool has_cycle(const Graph& g);
bool is_two_colorable(const Graph& g);

/// True when no two edges of the straight-line drawing cross or overlap and
/// no node lies on an edge it does not belong to.
bool crossing_free(const Graph& g, const std::vector<Point>& pos);

/// Shape of every connected component, precedence clique > star > chain
/// (K3 is a clique, P3 and P2 are chains). Throws ClassificationError for a
/// component of any other shape.
PatternCensus component_census(const Graph& g);

/// Label-respecting equality of adjacency, direction and weights.
/// Throws UnsupportedInput when either graph is unlabeled.
bool structural_equal(const Graph& a, const Graph& b);

/// Unordered node pairs without an edge, sorted.
std::vector<UndirectedEdge> non_adjacent_pairs(const Graph& g);

}  // namespace gvb
