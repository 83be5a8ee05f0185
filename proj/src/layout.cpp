#include "gvb/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <set>

#include "gvb/errors.hpp"
#include "gvb/oracles.hpp"

namespace gvb {

namespace {

constexpr std::string_view kLayoutNames[] = {"spring", "circular",     "spectral", "random",
                                             "shell",  "kamada_kawai", "planar"};

std::vector<UndirectedEdge> unique_pairs(const Graph& g) {
  std::set<UndirectedEdge> s;
  for (const auto& e : g.edges()) s.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
  return {s.begin(), s.end()};
}

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::string_view to_string(LayoutKind k) { return kLayoutNames[static_cast<int>(k)]; }

LayoutKind layout_kind_from_string(std::string_view name) {
  for (int i = 0; i < 7; ++i)
    if (kLayoutNames[i] == name) return static_cast<LayoutKind>(i);
  throw ParameterError("unknown layout kind: " + std::string(name));
}

Positions normalize_positions(Positions pos) {
  if (pos.empty()) return pos;
  double xmin = pos[0].x, xmax = pos[0].x, ymin = pos[0].y, ymax = pos[0].y;
  for (const auto& p : pos) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  for (auto& p : pos) {
    if (span <= 1e-12 || !std::isfinite(span)) {
      p = {0.5, 0.5};
    } else {
      p.x = std::clamp(0.5 + (p.x - cx) / span, 0.0, 1.0);
      p.y = std::clamp(0.5 + (p.y - cy) / span, 0.0, 1.0);
    }
  }
  return pos;
}

double spring_energy(const Graph& g, const Positions& pos, double k) {
  constexpr double kMinDist = 1e-9;
  double e = 0.0;
  for (const auto& [u, v] : unique_pairs(g)) {
    const double d = dist(pos[u], pos[v]);
    e += d * d * d / (3.0 * k);
  }
  const int n = static_cast<int>(pos.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e -= k * k * std::log(std::max(dist(pos[i], pos[j]), kMinDist));
  return e;
}

Positions spring_layout(const Graph& g, Rng& rng, const SpringOptions& options,
                        std::vector<double>* energy_trace) {
  const int n = g.node_count();
  if (n == 0) return {};
  Positions pos(static_cast<std::size_t>(n));
  for (auto& p : pos) {
    p.x = rng.uniform01();
    p.y = rng.uniform01();
  }
  if (n == 1) return normalize_positions(pos);
  const double k = 1.0 / std::sqrt(static_cast<double>(n));
  const auto pairs = unique_pairs(g);
  double energy = spring_energy(g, pos, k);
  std::vector<Point> disp(static_cast<std::size_t>(n));
  for (int it = 0; it < options.iterations; ++it) {
    const double temperature =
        options.initial_temperature * (1.0 - static_cast<double>(it) / options.iterations);
    std::fill(disp.begin(), disp.end(), Point{0.0, 0.0});
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
        double d = std::hypot(dx, dy);
        if (d < 1e-9) {
          // Coincident nodes: separate along a direction fixed by the indices.
          const double a = 0.7 * (i + 1) + 1.3 * (j + 1);
          dx = std::cos(a) * 1e-9;
          dy = std::sin(a) * 1e-9;
          d = 1e-9;
        }
        const double f = k * k / d;
        disp[i].x += dx / d * f;
        disp[i].y += dy / d * f;
        disp[j].x -= dx / d * f;
        disp[j].y -= dy / d * f;
      }
    }
    for (const auto& [u, v] : pairs) {
      const double dx = pos[u].x - pos[v].x, dy = pos[u].y - pos[v].y;
      const double d = std::hypot(dx, dy);
      if (d < 1e-12) continue;
      const double f = d * d / k;
      disp[u].x -= dx / d * f;
      disp[u].y -= dy / d * f;
      disp[v].x += dx / d * f;
      disp[v].y += dy / d * f;
    }
    for (auto& d : disp) {
      const double len = std::hypot(d.x, d.y);
      if (len > temperature && len > 0.0) {
        d.x *= temperature / len;
        d.y *= temperature / len;
      }
    }
    double scale = 1.0;
    for (int attempt = 0; attempt < 20; ++attempt, scale *= 0.5) {
      Positions trial = pos;
      for (int v = 0; v < n; ++v) {
        trial[v].x += scale * disp[v].x;
        trial[v].y += scale * disp[v].y;
      }
      const double e = spring_energy(g, trial, k);
      if (e <= energy) {
        pos = std::move(trial);
        energy = e;
        break;
      }
    }
    if (energy_trace) energy_trace->push_back(energy);
  }
  return normalize_positions(std::move(pos));
}

Positions circular_layout(const Graph& g) {
  const int n = g.node_count();
  Positions pos(static_cast<std::size_t>(n));
  if (n == 1) return {{0.5, 0.5}};
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    pos[i] = {std::cos(a), std::sin(a)};
  }
  return normalize_positions(std::move(pos));
}

Positions shell_layout(const Graph& g) {
  const int n = g.node_count();
  if (n == 1) return {{0.5, 0.5}};
  const auto deg = g.degrees();
  std::map<int, std::vector<NodeId>, std::greater<>> by_degree;
  for (NodeId v = 0; v < n; ++v) by_degree[deg[v]].push_back(v);
  Positions pos(static_cast<std::size_t>(n));
  int ring = 0;
  bool centre_used = false;
  for (const auto& [d, nodes] : by_degree) {
    (void)d;
    if (ring == 0 && nodes.size() == 1) {
      pos[nodes[0]] = {0.0, 0.0};
      centre_used = true;
      ++ring;
      continue;
    }
    const double radius = centre_used ? ring : ring + 1;
    const double offset = (ring % 2) ? std::numbers::pi / static_cast<double>(nodes.size()) : 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double a = offset + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(nodes.size());
      pos[nodes[i]] = {radius * std::cos(a), radius * std::sin(a)};
    }
    ++ring;
  }
  return normalize_positions(std::move(pos));
}

Positions random_layout(const Graph& g, Rng& rng) {
  Positions pos(static_cast<std::size_t>(g.node_count()));
  for (auto& p : pos) {
    p.x = rng.uniform01();
    p.y = rng.uniform01();
  }
  return pos;
}

namespace {

std::vector<std::vector<double>> hop_distances(const Graph& g) {
  const int n = g.node_count();
  const auto adj = g.undirected_adjacency();
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n), -1.0));
  double maxd = 0.0;
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    d[s][s] = 0.0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (d[s][v] < 0) {
          d[s][v] = d[s][u] + 1.0;
          maxd = std::max(maxd, d[s][v]);
          q.push(v);
        }
      }
    }
  }
  for (auto& row : d)
    for (double& x : row)
      if (x < 0) x = maxd + 1.0;
  return d;
}

}  // namespace

double layout_stress(const Graph& g, const Positions& pos) {
  const auto d = hop_distances(g);
  double s = 0.0;
  const int n = g.node_count();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double r = dist(pos[i], pos[j]) - d[i][j];
      s += r * r / (d[i][j] * d[i][j]);
    }
  return s;
}

Positions kamada_kawai_layout(const Graph& g, std::vector<double>* stress_trace) {
  const int n = g.node_count();
  if (n == 1) return {{0.5, 0.5}};
  const auto d = hop_distances(g);
  double maxd = 1.0;
  for (const auto& row : d)
    for (double x : row) maxd = std::max(maxd, x);
  Positions pos(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    pos[i] = {0.5 * maxd * std::cos(a), 0.5 * maxd * std::sin(a)};
  }
  for (int sweep = 0; sweep < 300; ++sweep) {
    double max_move = 0.0;
    for (int i = 0; i < n; ++i) {
      double sx = 0.0, sy = 0.0, sw = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double w = 1.0 / (d[i][j] * d[i][j]);
        const double r = dist(pos[i], pos[j]);
        double tx = pos[j].x, ty = pos[j].y;
        if (r > 1e-12) {
          tx += d[i][j] * (pos[i].x - pos[j].x) / r;
          ty += d[i][j] * (pos[i].y - pos[j].y) / r;
        }
        sx += w * tx;
        sy += w * ty;
        sw += w;
      }
      const Point next{sx / sw, sy / sw};
      max_move = std::max(max_move, dist(next, pos[i]));
      pos[i] = next;
    }
    if (stress_trace) stress_trace->push_back(layout_stress(g, pos));
    if (max_move < 1e-7) break;
  }
  return normalize_positions(std::move(pos));
}

DenseMatrix laplacian(const Graph& g) {
  DenseMatrix l(g.node_count());
  for (const auto& [u, v] : unique_pairs(g)) {
    l(u, v) -= 1.0;
    l(v, u) -= 1.0;
    l(u, u) += 1.0;
    l(v, v) += 1.0;
  }
  return l;
}

EigenDecomposition laplacian_spectrum(const Graph& g) { return jacobi_eigen(laplacian(g)); }

Positions spectral_layout(const Graph& g) {
  const int n = g.node_count();
  if (n == 1) return {{0.5, 0.5}};
  const auto eig = laplacian_spectrum(g);
  Positions pos(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    pos[v].x = eig.vectors[1][v];
    pos[v].y = n >= 3 ? eig.vectors[2][v] : 0.0;
  }
  return normalize_positions(std::move(pos));
}

std::optional<Positions> find_planar_drawing(const Graph& g, Rng& rng, int attempts) {
  if (auto p = kamada_kawai_layout(g); crossing_free(g, p)) return p;
  if (auto p = circular_layout(g); crossing_free(g, p)) return p;
  for (int i = 0; i < attempts; ++i) {
    Rng r = rng.fork(static_cast<std::uint64_t>(i));
    SpringOptions opts;
    opts.iterations = 100;
    if (auto p = spring_layout(g, r, opts); crossing_free(g, p)) return p;
  }
  return std::nullopt;
}

Positions compute_layout(const Graph& g, LayoutKind kind, Rng& rng) {
  if (g.node_count() < 1) throw ParameterError("compute_layout: graph has no nodes");
  switch (kind) {
    case LayoutKind::spring:
      return spring_layout(g, rng);
    case LayoutKind::circular:
      return circular_layout(g);
    case LayoutKind::spectral:
      return spectral_layout(g);
    case LayoutKind::random:
      return random_layout(g, rng);
    case LayoutKind::shell:
      return shell_layout(g);
    case LayoutKind::kamada_kawai:
      return kamada_kawai_layout(g);
    case LayoutKind::planar:
      if (!g.planar_certificate())
        throw UnsupportedInput("planar layout: graph carries no planar certificate");
      return normalize_positions(g.planar_certificate()->positions);
  }
  throw ParameterError("compute_layout: unknown kind");
}

Positions inject_overlap(const Positions& pos, double severity, double diameter, Rng& rng,
                         std::vector<std::pair<NodeId, NodeId>>* moved) {
  if (!(severity >= 0.0 && severity <= 1.0))
    throw ParameterError("inject_overlap: severity must lie in [0,1]");
  Positions out = pos;
  const int n = static_cast<int>(pos.size());
  const int pairs = static_cast<int>(std::floor(severity * (n / 2)));
  if (pairs == 0) return out;
  const auto perm = rng.permutation(n);
  for (int i = 0; i < pairs; ++i) {
    const NodeId anchor = perm[2 * i], mover = perm[2 * i + 1];
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = rng.uniform(0.0, 0.5) * diameter;
    out[mover].x = std::clamp(out[anchor].x + r * std::cos(angle), 0.0, 1.0);
    out[mover].y = std::clamp(out[anchor].y + r * std::sin(angle), 0.0, 1.0);
    if (moved) moved->emplace_back(anchor, mover);
  }
  return out;
}

double min_pairwise_distance(const Positions& pos) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j) best = std::min(best, dist(pos[i], pos[j]));
  return best;
}

}  // namespace gvb
