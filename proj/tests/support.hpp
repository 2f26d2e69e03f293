#pragma once

// Hand-rolled generators for property tests.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "avgbin/averaging.hpp"
#include "avgbin/graphs.hpp"
#include "avgbin/rng.hpp"

namespace avgbin::test {

inline std::size_t uniform_index(CounterRng& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

// Random spanning tree (each vertex attaches to an earlier one) plus extra
// edges, conductances uniform in [lo, hi].
inline WeightedGraph random_connected_graph(std::size_t n, CounterRng& rng, double lo = 0.5, double hi = 2.0) {
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  auto add = [&](std::size_t x, std::size_t y) {
    if (x == y || has[x][y]) return;
    has[x][y] = has[y][x] = true;
    edges.push_back({static_cast<Vertex>(x), static_cast<Vertex>(y), lo + (hi - lo) * rng.uniform()});
  };
  for (std::size_t v = 1; v < n; ++v) add(uniform_index(rng, v), v);
  const std::size_t extra = uniform_index(rng, n + 1);
  for (std::size_t i = 0; i < extra; ++i) add(uniform_index(rng, n), uniform_index(rng, n));
  return WeightedGraph(n, std::move(edges), "random(" + std::to_string(n) + ")");
}

inline SiteWeights random_weights(std::size_t n, CounterRng& rng, double ratio = 3.0) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& v : w) total += v = 1.0 + (ratio - 1.0) * rng.uniform();
  for (auto& v : w) v /= total;
  return SiteWeights(std::move(w));
}

inline std::vector<double> random_values(std::size_t count, CounterRng& rng) {
  std::vector<double> v(count);
  for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

// Dense generator of the single particle, built straight from the rates
// c_xy pi(y) / (pi(x) + pi(y)).
inline Eigen::MatrixXd bin1_dense(const WeightedGraph& g, const SiteWeights& pi) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const double s = pi[e.x] + pi[e.y];
    q(e.x, e.y) += e.c * pi[e.y] / s;
    q(e.y, e.x) += e.c * pi[e.x] / s;
  }
  for (Eigen::Index i = 0; i < n; ++i) q(i, i) = -q.row(i).sum();
  return q;
}

}  // namespace avgbin::test
