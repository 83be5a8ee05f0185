#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gvb {

using NodeId = int;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  std::optional<int> weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct WeightRange {
  int min = 1;
  int max = 10;

  friend bool operator==(const WeightRange&, const WeightRange&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Rows x cols grid; node (r, c) has index r * cols + c.
struct MeshCertificate {
  int rows = 0;
  int cols = 0;

  friend bool operator==(const MeshCertificate&, const MeshCertificate&) = default;
};

/// Straight-line drawing whose edges do not cross.
struct PlanarCertificate {
  std::vector<Point> positions;

  friend bool operator==(const PlanarCertificate&, const PlanarCertificate&) = default;
};

/// Simple graph (no self loops, no parallel edges) on nodes 0..n-1.
///
/// Edges keep insertion order; undirected edges are stored as given but
/// compared as unordered pairs.
class Graph {
 public:
  Graph() = default;
  Graph(int node_count, bool directed);

  int node_count() const { return node_count_; }
  bool directed() const { return directed_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Throws ParameterError on a self loop, duplicate, out-of-range endpoint
  /// or a weight outside the declared range.
  void add_edge(NodeId u, NodeId v, std::optional<int> weight = std::nullopt);
  /// Removes the edge (u,v) ({u,v} when undirected); returns false if absent.
  bool remove_edge(NodeId u, NodeId v);

  bool has_edge(NodeId u, NodeId v) const;
  std::optional<int> weight(NodeId u, NodeId v) const;

  /// Sorted neighbour lists ignoring direction.
  std::vector<std::vector<NodeId>> undirected_adjacency() const;
  /// Sorted successor lists (equal to undirected_adjacency when undirected).
  std::vector<std::vector<NodeId>> out_adjacency() const;
  std::vector<int> degrees() const;

  const std::optional<std::vector<std::string>>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);
  void clear_labels() { labels_.reset(); }
  /// "0".."n-1".
  void set_index_labels();
  std::string label_of(NodeId v) const;

  const std::optional<WeightRange>& weight_range() const { return weight_range_; }
  void set_weight_range(WeightRange r);

  const std::optional<MeshCertificate>& mesh_certificate() const { return mesh_; }
  void set_mesh_certificate(MeshCertificate m) { mesh_ = m; }
  const std::optional<PlanarCertificate>& planar_certificate() const { return planar_; }
  void set_planar_certificate(PlanarCertificate p);

  /// Same graph with node v renamed to perm[v]; labels stay attached to
  /// positions (label i still names node i), certificates are dropped.
  Graph permuted(const std::vector<NodeId>& perm) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t slot(NodeId u, NodeId v) const;

  int node_count_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> present_;
  std::optional<std::vector<std::string>> labels_;
  std::optional<WeightRange> weight_range_;
  std::optional<MeshCertificate> mesh_;
  std::optional<PlanarCertificate> planar_;
};

enum class GraphClass { acyclic, cyclic, bipartite, complete, mesh, planar, tree };

inline constexpr GraphClass kAllGraphClasses[] = {
    GraphClass::acyclic, GraphClass::cyclic, GraphClass::bipartite, GraphClass::complete,
    GraphClass::mesh,    GraphClass::planar, GraphClass::tree};

std::string_view to_string(GraphClass c);
/// Throws ParameterError for names outside the closed set.
GraphClass graph_class_from_string(std::string_view name);
std::optional<GraphClass> try_graph_class(std::string_view name);

/// JSON shape: {"node_count", "directed", "labels": [..]|null,
/// "edges": [[u,v] | [u,v,w], ...], optional "weight_range": [min,max],
/// "mesh": {"rows","cols"}, "planar_embedding": [[x,y], ...]}.
nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

// Helpers shared by oracles and generators.

/// Component id per node (undirected view), components numbered by smallest member.
std::vector<int> connected_components(const Graph& g, int* count = nullptr);
bool is_connected(const Graph& g);

}  // namespace gvb
