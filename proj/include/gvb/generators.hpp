#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gvb/graph.hpp"
#include "gvb/rng.hpp"

namespace gvb {

/// G(n, p) with independent pair draws.
///
/// Draw order (fixed, relied on by reference enumerators): pairs are visited
/// row-major - undirected (i, j) for i < j, directed (i, j) for all i != j -
/// and each pair consumes one uniform01(); an accepted pair then consumes one
/// uniform_int(wmin, wmax) when weights are requested.
Graph random_graph(int n, double p, bool directed, std::optional<WeightRange> weights, Rng& rng);

struct TypedGraphParams {
  /// Node count, or upper bound on rows*cols for meshes without explicit dims.
  int nodes = 10;
  std::optional<int> rows;
  std::optional<int> cols;
  /// Extra-edge probability for acyclic/cyclic classes.
  double edge_probability = 0.3;
  /// Fraction of planar triangulation edges considered for deletion.
  double planar_thinning = 0.3;
};

/// Graph belonging to `cls` by construction. Mesh graphs carry a
/// MeshCertificate, planar graphs a PlanarCertificate. Acyclic and cyclic
/// graphs are directed, all others undirected.
Graph typed_graph(GraphClass cls, const TypedGraphParams& params, Rng& rng);

enum class PatternKind { chain, clique, star };

inline constexpr PatternKind kAllPatternKinds[] = {PatternKind::chain, PatternKind::clique,
                                                   PatternKind::star};

std::string_view to_string(PatternKind k);
std::optional<PatternKind> try_pattern_kind(std::string_view name);

struct PatternSpec {
  PatternKind kind = PatternKind::chain;
  int size = 2;
};

/// Disjoint union of the requested patterns. Components occupy contiguous
/// index blocks in an order shuffled by `rng`; a star's centre is the first
/// node of its block, a chain runs through its block in index order.
Graph pattern_graph(const std::vector<PatternSpec>& census, Rng& rng);

}  // namespace gvb
