#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "gvb/eigen.hpp"
#include "gvb/graph.hpp"
#include "gvb/rng.hpp"

namespace gvb {

enum class LayoutKind { spring, circular, spectral, random, shell, kamada_kawai, planar };

inline constexpr LayoutKind kAllLayoutKinds[] = {
    LayoutKind::spring, LayoutKind::circular,     LayoutKind::spectral, LayoutKind::random,
    LayoutKind::shell,  LayoutKind::kamada_kawai, LayoutKind::planar};

std::string_view to_string(LayoutKind k);
/// Throws ParameterError for unknown names.
LayoutKind layout_kind_from_string(std::string_view name);

/// One point per node, inside [0,1]^2.
using Positions = std::vector<Point>;

/// Dispatches on `kind`; every kind except `random` is rescaled with
/// normalize_positions. `planar` uses the graph's planar certificate and
/// throws UnsupportedInput without one.
Positions compute_layout(const Graph& g, LayoutKind kind, Rng& rng);

/// Centre the bounding box on (0.5, 0.5) and scale uniformly so the larger
/// side spans [0,1]. A degenerate point set collapses to (0.5, 0.5).
Positions normalize_positions(Positions pos);

struct SpringOptions {
  int iterations = 50;
  double initial_temperature = 0.1;
};

/// Fruchterman-Reingold forces with k = 1/sqrt(n), linear cooling to zero,
/// random initial placement. A step that would raise the FR potential is
/// halved (up to 20 times) before being dropped, so the potential never
/// increases. `energy_trace` receives the potential after each iteration.
Positions spring_layout(const Graph& g, Rng& rng, const SpringOptions& options = {},
                        std::vector<double>* energy_trace = nullptr);

/// FR potential: sum_edges d^3/(3k) - sum_pairs k^2 ln d.
double spring_energy(const Graph& g, const Positions& pos, double k);

Positions circular_layout(const Graph& g);
Positions shell_layout(const Graph& g);
Positions random_layout(const Graph& g, Rng& rng);

/// Stress majorization on the hop-distance matrix (weights d^-2), starting
/// from the circular layout. `stress_trace` receives stress per sweep.
Positions kamada_kawai_layout(const Graph& g, std::vector<double>* stress_trace = nullptr);
double layout_stress(const Graph& g, const Positions& pos);

/// Combinatorial Laplacian D - A of the undirected view.
DenseMatrix laplacian(const Graph& g);
EigenDecomposition laplacian_spectrum(const Graph& g);
/// Coordinates from the eigenvectors of the 2nd and 3rd smallest
/// eigenvalues (y = 0 when n = 2).
Positions spectral_layout(const Graph& g);

/// Searches kamada-kawai, spring restarts and the circular layout for a
/// drawing accepted by crossing_free(). Positions are normalized.
std::optional<Positions> find_planar_drawing(const Graph& g, Rng& rng, int attempts = 40);

/// Moves the second node of floor(severity * floor(n/2)) disjoint random
/// pairs to within half a node diameter of the first. `moved` receives the
/// (anchor, moved) pairs.
Positions inject_overlap(const Positions& pos, double severity, double diameter, Rng& rng,
                         std::vector<std::pair<NodeId, NodeId>>* moved = nullptr);

double min_pairwise_distance(const Positions& pos);

}  // namespace gvb
