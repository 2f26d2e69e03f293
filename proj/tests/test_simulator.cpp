#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "avgbin/distance.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/simulator.hpp"
#include "avgbin/uniformization.hpp"
#include "support.hpp"

using namespace avgbin;

namespace {

SimOptions options(double t, std::uint64_t seed, std::uint64_t replica,
                   CouplingMode mode = CouplingMode::fast_binomial) {
  SimOptions o;
  o.t_end = t;
  o.seed = seed;
  o.replica_id = replica;
  o.mode = mode;
  return o;
}

// Empirical law of the final configuration against the exact transient law.
double bin_law_tv(CouplingMode mode, int replicas) {
  const auto g = cycle_graph(3);
  const auto pi = random_elliptic_weights(3, 2.0, 8);
  const ParticleConfig xi0{3, 0, 0};
  const UnlabeledSpace s(3, 3);
  const double t = 0.6;
  std::vector<double> init(s.size(), 0.0);
  init[s.index(xi0)] = 1.0;
  const auto exact = transient_distribution(generator_bin_unlabeled(g, pi, s), init, t, 1e-12);
  std::vector<double> emp(s.size(), 0.0);
  for (int r = 0; r < replicas; ++r) emp[s.index(simulate_bin(g, pi, xi0, options(t, 5, r, mode)).back())] += 1.0;
  for (auto& v : emp) v /= replicas;
  double tv = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) tv += 0.5 * std::abs(emp[i] - exact[i]);
  return tv;
}

}  // namespace

TEST_CASE("identical options give identical trajectories") {
  const auto g = cycle_graph(5);
  const auto pi = random_elliptic_weights(5, 2.0, 1);
  auto o = options(3.0, 7, 2);
  o.record_times = {0.0, 1.0, 2.0, 3.0};
  const auto a = simulate_averaging(g, pi, SimplexPoint::dirac(5, 0), o);
  const auto b = simulate_averaging(g, pi, SimplexPoint::dirac(5, 0), o);
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::equal(a[i].values().begin(), a[i].values().end(), b[i].values().begin()));
  CHECK(a[0][0] == 1.0);
  auto other = o;
  other.replica_id = 3;
  CHECK_FALSE(std::equal(a[3].values().begin(), a[3].values().end(),
                         simulate_averaging(g, pi, SimplexPoint::dirac(5, 0), other)[3].values().begin()));
}

TEST_CASE("edge sampler frequencies follow the conductances") {
  const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 3.0}, {0, 2, 6.0}});
  const EdgeSampler sampler(g);
  CHECK(sampler.total_rate() == 10.0);
  CounterRng rng(3, 0);
  std::vector<double> counts(3, 0.0);
  const int m = 100000;
  for (int i = 0; i < m; ++i) counts[sampler.sample_edge(rng)] += 1.0;
  const double expected[] = {0.1, 0.3, 0.6};
  for (int e = 0; e < 3; ++e)
    CHECK(std::abs(counts[e] / m - expected[e]) < 4.0 * std::sqrt(expected[e] * (1 - expected[e]) / m));
}

TEST_CASE("Binomial Splitting conserves particles and matches the exact law") {
  CHECK(bin_law_tv(CouplingMode::fast_binomial, 40000) < 0.015);
  CHECK(bin_law_tv(CouplingMode::per_particle_bernoulli, 40000) < 0.015);
  const auto g = torus_graph({3, 3});
  const ParticleConfig xi0{5, 0, 0, 0, 7, 0, 0, 0, 1};
  for (const auto& xi : simulate_bin(g, uniform_weights(9), xi0, options(4.0, 1, 0)))
    CHECK(std::accumulate(xi.begin(), xi.end(), 0u) == 13u);
}

TEST_CASE("labeled occupations follow the unlabeled law") {
  const auto g = path_graph(3);
  const auto pi = random_elliptic_weights(3, 2.0, 9);
  const std::vector<Vertex> xs0{0, 0};
  const UnlabeledSpace s(3, 2);
  std::vector<double> init(s.size(), 0.0);
  init[s.index(ParticleConfig{2, 0, 0})] = 1.0;
  const auto exact = transient_distribution(generator_bin_unlabeled(g, pi, s), init, 0.9, 1e-12);
  std::vector<double> emp(s.size(), 0.0);
  const int m = 40000;
  for (int r = 0; r < m; ++r)
    emp[s.index(occupation_of(simulate_bin_labeled(g, pi, xs0, options(0.9, 2, r)).back(), 3))] += 1.0 / m;
  double tv = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) tv += 0.5 * std::abs(emp[i] - exact[i]);
  CHECK(tv < 0.015);
}

TEST_CASE("Averaging mean follows the single-particle law; L2 distance never increases") {
  const auto g = cycle_graph(4);
  const auto pi = random_elliptic_weights(4, 2.0, 10);
  const double t = 0.7;
  const auto p = transient_distribution(generator_bin1(g, pi), std::vector<double>{1, 0, 0, 0}, t, 1e-13);
  std::vector<double> at1(20000);
  for (std::size_t r = 0; r < at1.size(); ++r) {
    auto o = options(t, 4, r);
    o.record_times = {0.1, 0.2, 0.35, 0.5, t};
    const auto path = simulate_averaging(g, pi, SimplexPoint::dirac(4, 0), o);
    for (std::size_t i = 1; i < path.size(); ++i)
      REQUIRE(l2_distance_sq(path[i].values(), pi) <= l2_distance_sq(path[i - 1].values(), pi) + 1e-14);
    at1[r] = path.back()[1];
  }
  const auto est = summarize(at1);
  CHECK(std::abs(est.mean - p[1]) < 4.0 * est.std_err);
}

TEST_CASE("multicolored run projects onto the per-particle run") {
  const auto g = cycle_graph(4);
  const auto pi = random_elliptic_weights(4, 2.0, 11);
  const ParticleConfig xi0{0, 3, 1, 2};
  for (std::uint64_t r = 0; r < 200; ++r) {
    auto o = options(2.0, 6, r, CouplingMode::per_particle_bernoulli);
    o.record_times = {0.5, 1.0, 2.0};
    const auto plain = simulate_bin(g, pi, xi0, o);
    const auto colored = simulate_multicolored(g, pi, xi0, o);
    REQUIRE(plain.size() == colored.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
      CHECK(colored[i].color_sum() == plain[i]);
      CHECK(std::accumulate(colored[i].colors[0].begin(), colored[i].colors[0].end(), 0u) == 0u);
      CHECK(std::accumulate(colored[i].colors[1].begin(), colored[i].colors[1].end(), 0u) == 3u);
    }
  }
  CHECK_THROWS(simulate_multicolored(g, pi, xi0, options(1.0, 1, 0, CouplingMode::fast_binomial)));
}

TEST_CASE("trajectory CSV layout") {
  CHECK(trajectory_header(TrajectoryKind::averaging, 2) == "replica,t,eta_0,eta_1");
  CHECK(trajectory_header(TrajectoryKind::labeled, 3, 2) == "replica,t,x_0,x_1");
  CHECK(trajectory_header(TrajectoryKind::multicolored, 2) == "replica,t,c0_v0,c0_v1,c1_v0,c1_v1");
  std::ostringstream out;
  write_trajectory_row(out, 3, 0.5, std::vector<std::uint32_t>{1, 2});
  CHECK(out.str() == "3,0.5,1,2\n");
}
