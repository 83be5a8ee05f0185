#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gvb/errors.hpp"
#include "gvb/generators.hpp"
#include "gvb/layout.hpp"
#include "gvb/oracles.hpp"
#include "reference.hpp"

using namespace gvb;

namespace {

Graph path_graph(int n) {
  Graph g(n, false);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  g.add_edge(n - 1, 0);
  return g;
}

Graph complete_graph(int n) {
  Graph g(n, false);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

double residual(const DenseMatrix& m, double lambda, const std::vector<double>& v) {
  double worst = 0;
  for (int i = 0; i < m.n; ++i) {
    double s = -lambda * v[i];
    for (int j = 0; j < m.n; ++j) s += m(i, j) * v[j];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

bool inside_unit(const Positions& p) {
  return std::all_of(p.begin(), p.end(), [](Point q) {
    return q.x >= -1e-12 && q.x <= 1 + 1e-12 && q.y >= -1e-12 && q.y <= 1 + 1e-12;
  });
}

}  // namespace

TEST_CASE("jacobi matches Eigen on random symmetric matrices") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 12));
    DenseMatrix m(n);
    Eigen::MatrixXd e(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double x = rng.uniform(-3, 3);
        m(i, j) = m(j, i) = x;
        e(i, j) = e(j, i) = x;
      }
    auto dec = jacobi_eigen(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e);
    REQUIRE(dec.values.size() == static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      CHECK(dec.values[k] == doctest::Approx(solver.eigenvalues()(k)).epsilon(1e-9));
      CHECK(residual(m, dec.values[k], dec.vectors[k]) < 1e-7);
      double norm = 0;
      for (double x : dec.vectors[k]) norm += x * x;
      CHECK(norm == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("laplacian spectra of paths, cycles and complete graphs") {
  for (int n = 2; n <= 12; ++n) {
    auto p = laplacian_spectrum(path_graph(n));
    for (int k = 0; k < n; ++k)
      CHECK(p.values[k] == doctest::Approx(2 - 2 * std::cos(std::numbers::pi * k / n)).epsilon(1e-9));
    auto kn = laplacian_spectrum(complete_graph(n));
    CHECK(std::abs(kn.values[0]) < 1e-9);
    for (int k = 1; k < n; ++k) CHECK(kn.values[k] == doctest::Approx(n));
  }
  for (int n = 3; n <= 12; ++n) {
    auto c = laplacian_spectrum(cycle_graph(n));
    std::vector<double> want;
    for (int k = 0; k < n; ++k) want.push_back(2 - 2 * std::cos(2 * std::numbers::pi * k / n));
    std::sort(want.begin(), want.end());
    for (int k = 0; k < n; ++k) CHECK(c.values[k] == doctest::Approx(want[k]).epsilon(1e-9));
  }
}

TEST_CASE("laplacian basics hold on random graphs") {
  Rng meta(8);
  for (int i = 0; i < 60; ++i) {
    const int n = static_cast<int>(meta.uniform_int(1, 30));
    Rng rng(meta.next_u64());
    Graph g = random_graph(n, 0.2, meta.bernoulli(0.5), std::nullopt, rng);
    auto l = laplacian(g);
    auto dec = laplacian_spectrum(g);
    int comps = 0;
    connected_components(g, &comps);
    int zeros = 0;
    for (int k = 0; k < n; ++k) {
      CHECK(residual(l, dec.values[k], dec.vectors[k]) < 1e-6);
      CHECK(dec.values[k] > -1e-9);
      if (dec.values[k] < 1e-8) ++zeros;
    }
    CHECK(zeros == comps);
    double trace = 0;
    for (int k = 0; k < n; ++k) trace += l(k, k);
    double degree_sum = 0;
    for (const auto& nb : g.undirected_adjacency()) degree_sum += static_cast<double>(nb.size());
    CHECK(trace == doctest::Approx(degree_sum));
  }
}

TEST_CASE("fiedler value of paths decreases with length") {
  double prev = 1e9;
  for (int n = 3; n <= 10; ++n) {
    const double f = laplacian_spectrum(path_graph(n)).values[1];
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("spring energy never increases") {
  Rng meta(12);
  for (int i = 0; i < 30; ++i) {
    const int n = static_cast<int>(meta.uniform_int(2, 20));
    Rng g_rng(meta.next_u64());
    Graph g = random_graph(n, 0.3, false, std::nullopt, g_rng);
    Rng rng(meta.next_u64());
    std::vector<double> trace;
    auto pos = spring_layout(g, rng, {}, &trace);
    REQUIRE(trace.size() == 50);
    for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] <= trace[k - 1] + 1e-9);
    CHECK(inside_unit(pos));
  }
}

TEST_CASE("kamada kawai stress never increases") {
  Rng meta(13);
  for (int i = 0; i < 30; ++i) {
    const int n = static_cast<int>(meta.uniform_int(2, 20));
    Rng g_rng(meta.next_u64());
    Graph g = random_graph(n, 0.3, false, std::nullopt, g_rng);
    std::vector<double> trace;
    auto pos = kamada_kawai_layout(g, &trace);
    for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] <= trace[k - 1] + 1e-9);
    CHECK(inside_unit(pos));
  }
}

TEST_CASE("every layout kind lands in the unit square") {
  Rng rng(3);
  TypedGraphParams params;
  params.nodes = 9;
  Graph g = typed_graph(GraphClass::planar, params, rng);
  for (LayoutKind k : kAllLayoutKinds) {
    Rng r(17);
    auto pos = compute_layout(g, k, r);
    REQUIRE(pos.size() == 9);
    CHECK(inside_unit(pos));
    CHECK(layout_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(layout_kind_from_string("force"), ParameterError);
  Rng r(1);
  CHECK_THROWS_AS(compute_layout(path_graph(3), LayoutKind::planar, r), UnsupportedInput);
}

TEST_CASE("layouts are deterministic per seed") {
  Graph g = cycle_graph(8);
  for (LayoutKind k : {LayoutKind::spring, LayoutKind::random}) {
    Rng a(99), b(99);
    CHECK(compute_layout(g, k, a) == compute_layout(g, k, b));
  }
}

TEST_CASE("circular and shell geometry") {
  auto c = circular_layout(cycle_graph(6));
  const double r0 = std::hypot(c[0].x - 0.5, c[0].y - 0.5);
  for (auto p : c) CHECK(std::hypot(p.x - 0.5, p.y - 0.5) == doctest::Approx(r0));
  CHECK(min_pairwise_distance(c) > 0.4);
  auto s = shell_layout(complete_graph(7));
  CHECK(inside_unit(s));
  CHECK(min_pairwise_distance(s) > 0.1);
}

TEST_CASE("normalize_positions") {
  auto p = normalize_positions({{2, 2}, {4, 3}});
  CHECK(p[0].x == doctest::Approx(0.0));
  CHECK(p[1].x == doctest::Approx(1.0));
  CHECK(p[0].y == doctest::Approx(0.25));
  CHECK(p[1].y == doctest::Approx(0.75));
  auto d = normalize_positions({{3, 3}, {3, 3}});
  CHECK(d[0] == Point{0.5, 0.5});
  CHECK(normalize_positions({}).empty());
}

TEST_CASE("planar drawings are crossing free") {
  Rng meta(21);
  int found = 0;
  for (int i = 0; i < 30; ++i) {
    Rng rng(meta.next_u64());
    TypedGraphParams params;
    params.nodes = static_cast<int>(meta.uniform_int(4, 10));
    Graph g = typed_graph(GraphClass::planar, params, rng);
    auto d = find_planar_drawing(g, rng, 10);
    if (d) {
      ++found;
      CHECK(crossing_free(g, *d));
      CHECK(inside_unit(*d));
    }
  }
  CHECK(found > 0);
  // K5 has no planar drawing
  Rng rng(2);
  CHECK_FALSE(find_planar_drawing(complete_graph(5), rng, 5));
}

TEST_CASE("overlap injection") {
  Rng rng(4);
  Positions base = circular_layout(cycle_graph(10));
  std::vector<std::pair<NodeId, NodeId>> moved;
  auto out = inject_overlap(base, 1.0, 0.08, rng, &moved);
  REQUIRE(moved.size() == 5);
  std::vector<int> seen;
  for (auto [a, b] : moved) {
    CHECK(std::hypot(out[a].x - out[b].x, out[a].y - out[b].y) <= 0.04 + 1e-12);
    seen.push_back(a);
    seen.push_back(b);
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  moved.clear();
  auto half = inject_overlap(base, 0.5, 0.08, rng, &moved);
  CHECK(moved.size() == 2);
  CHECK(inject_overlap(base, 0.0, 0.08, rng) == base);
  CHECK_THROWS_AS(inject_overlap(base, 1.5, 0.08, rng), ParameterError);
  (void)half;
}

TEST_CASE("min_pairwise_distance") {
  CHECK(min_pairwise_distance({{0, 0}, {3, 4}, {10, 10}}) == doctest::Approx(5.0));
  CHECK(std::isinf(min_pairwise_distance({{1, 1}})));
}
