#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "avgbin/graphs.hpp"
#include "support.hpp"

using namespace avgbin;

TEST_CASE("builder sizes") {
  CHECK(path_graph(5).num_edges() == 4);
  CHECK(cycle_graph(5).num_edges() == 5);
  CHECK(cycle_graph(2).num_edges() == 1);
  CHECK(cycle_graph(1).num_edges() == 0);
  CHECK(complete_graph(6).num_edges() == 15);
  CHECK(torus_graph({8, 8}).num_edges() == 128);
  CHECK(torus_graph({2, 3}).num_edges() == 3 + 2 * 3);
  // (3^{L+1} + 3) / 2 vertices and 3^{L+1} edges at level L.
  for (int level = 0; level <= 4; ++level) {
    const auto g = sierpinski_gasket(level);
    const auto p = static_cast<std::size_t>(std::pow(3, level + 1));
    CHECK(g.num_vertices() == (p + 3) / 2);
    CHECK(g.num_edges() == p);
  }
}

TEST_CASE("torus index is row-major") {
  const auto g = torus_graph({3, 4});
  // (1, 2) -> 6 neighbours (0, 2) = 2, (2, 2) = 10, (1, 1) = 5, (1, 3) = 7
  std::vector<Vertex> nb;
  for (const auto& inc : g.neighbors(6)) nb.push_back(inc.neighbor);
  std::sort(nb.begin(), nb.end());
  CHECK(nb == std::vector<Vertex>{2, 5, 7, 10});
}

TEST_CASE("invalid graphs are rejected") {
  CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1.0}}), GraphError);             // disconnected
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 0, 1.0}, {0, 1, 1.0}}), GraphError);  // loop
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, -1.0}}), GraphError);
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 2, 1.0}}), GraphError);
  CHECK_THROWS(SiteWeights({0.5, 0.6}));
  CHECK_THROWS(SiteWeights({1.0, 0.0}));
}

TEST_CASE("elliptic weights respect the ratio") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pi = random_elliptic_weights(10, 3.0, seed);
    CHECK(ellipticity_ratio(pi) <= 3.0 + 1e-12);
    CHECK(std::accumulate(pi.values().begin(), pi.values().end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("percolation cluster keeps box order and is connected") {
  const auto pc = percolation_cluster({6, 6}, 0.8, 5);
  CHECK(pc.graph.num_vertices() >= 18);
  CHECK(std::is_sorted(pc.box_index.begin(), pc.box_index.end()));
  for (const Edge& e : pc.graph.edges()) {
    const auto a = pc.box_index[e.x], b = pc.box_index[e.y];
    const auto d = a > b ? a - b : b - a;
    CHECK((d == 1 || d == 6));
  }
  CHECK_THROWS_AS(percolation_cluster({6, 6}, 0.05, 5), PercolationRetry);
}

TEST_CASE("edge list round trip and conductance replacement") {
  std::istringstream in("# triangle\n0 1 1.5\n1 2 2\n2 0 0.5\n");
  const auto g = read_edge_list(in);
  CHECK(g.num_vertices() == 3);
  CHECK(g.total_conductance() == doctest::Approx(4.0));
  const std::vector<double> c{1.0, 1.0, 1.0};
  CHECK(with_conductances(g, c).total_conductance() == doctest::Approx(3.0));
  const auto r = random_conductances(cycle_graph(10), 0.5, 2.0, 3);
  for (const Edge& e : r.edges()) CHECK((e.c >= 0.5 && e.c <= 2.0));
  std::istringstream bad("0 1\n");
  CHECK_THROWS(read_edge_list(bad));
}

TEST_CASE("isomorphic relabelings share the degree signature") {
  const auto a = cycle_graph(6);
  std::vector<Edge> relabeled;
  const std::vector<Vertex> perm{3, 5, 0, 2, 4, 1};
  for (const Edge& e : a.edges()) relabeled.push_back({perm[e.x], perm[e.y], e.c});
  CHECK(degree_signature(a) == degree_signature(WeightedGraph(6, relabeled)));
  CHECK(degree_signature(a) != degree_signature(path_graph(6)));
}

TEST_CASE("property: random connected graphs are valid") {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + test::uniform_index(rng, 9);
    const auto g = test::random_connected_graph(n, rng);
    CHECK(g.num_vertices() == n);
    CHECK(g.num_edges() >= n - 1);
    std::size_t degree_sum = 0;
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) degree_sum += g.neighbors(v).size();
    CHECK(degree_sum == 2 * g.num_edges());
  }
}
