#include <doctest.h>

#include <cmath>
#include <numeric>

#include "avgbin/averaging.hpp"
#include "support.hpp"

using namespace avgbin;

TEST_CASE("edge update splits the pooled mass by the weights") {
  const SiteWeights pi({0.2, 0.3, 0.5});
  const SimplexPoint eta({0.6, 0.1, 0.3});
  const auto u = edge_update(eta, 0, 2, pi);
  CHECK(u[0] == doctest::Approx(0.9 * 0.2 / 0.7));
  CHECK(u[2] == doctest::Approx(0.9 * 0.5 / 0.7));
  CHECK(u[1] == 0.1);
  CHECK_THROWS(SimplexPoint({0.5, 0.6}));
  CHECK_THROWS(SimplexPoint({1.5, -0.5}));
}

TEST_CASE("property: updates conserve mass and never increase the L2 distance") {
  CounterRng rng(9, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + test::uniform_index(rng, 8);
    const auto pi = test::random_weights(n, rng);
    const auto eta = random_simplex_point(n, rng);
    const auto x = static_cast<Vertex>(test::uniform_index(rng, n));
    auto y = static_cast<Vertex>(test::uniform_index(rng, n - 1));
    if (y >= x) ++y;
    const auto u = edge_update(eta, x, y, pi);
    double mass = 0.0;
    for (double v : u.values()) mass += v;
    CHECK(std::abs(mass - 1.0) < 1e-14);
    CHECK(std::abs((u[x] + u[y]) - (eta[x] + eta[y])) <= 0x1p-52 * (eta[x] + eta[y]));
    CHECK(l2_distance_sq(u.values(), pi) <= l2_distance_sq(eta.values(), pi) + 1e-15);
    CHECK(std::abs(l2_drop(eta, x, y, pi) - l2_drop_closed_form(eta, x, y, pi)) < 1e-12);
    // Densities on {x, y} become equal.
    CHECK(u[x] / pi[x] == doctest::Approx(u[y] / pi[y]).epsilon(1e-13));
  }
}

TEST_CASE("generator of a linear function follows the single-particle chain") {
  CounterRng rng(10, 0);
  const auto g = test::random_connected_graph(5, rng);
  const auto pi = test::random_weights(5, rng);
  const auto h = test::random_values(5, rng);
  const SimplexFunction f = [&](const SimplexPoint& e) {
    double s = 0.0;
    for (std::size_t x = 0; x < 5; ++x) s += h[x] * e[x];
    return s;
  };
  const auto eta = random_simplex_point(5, rng);
  // Mass flow: d/dt E eta_t = eta Q with Q the single-particle generator.
  const Eigen::MatrixXd q = test::bin1_dense(g, pi);
  double expected = 0.0;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) expected += eta[x] * q(x, y) * h[y];
  CHECK(avg_generator_apply(f, eta, g, pi) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("transport norms") {
  const SiteWeights pi({0.25, 0.75});
  const std::vector<double> eta{1.0, 0.0};
  CHECK(transport_norm(eta, pi, 1.0) == doctest::Approx(0.25 * 3.0 + 0.75 * 1.0));
  CHECK(transport_norm(eta, pi, 2.0) == doctest::Approx(std::sqrt(0.25 * 9.0 + 0.75)));
  CHECK(transport_norm(eta, pi, INFINITY) == doctest::Approx(3.0));
  CHECK(l2_distance_sq(pi.values(), pi) == 0.0);
}

TEST_CASE("random simplex points are uniform") {
  CounterRng rng(11, 0);
  double first = 0.0;
  const int m = 20000;
  for (int i = 0; i < m; ++i) {
    const auto p = random_simplex_point(4, rng);
    first += p[0];
    CHECK(std::abs(std::accumulate(p.values().begin(), p.values().end(), 0.0) - 1.0) < 1e-12);
  }
  // Dirichlet(1,1,1,1) marginal mean 1/4, sd sqrt(3/80).
  CHECK(std::abs(first / m - 0.25) < 4.0 * std::sqrt(3.0 / 80.0 / m));
}
