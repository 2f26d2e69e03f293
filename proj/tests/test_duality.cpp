#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "avgbin/distance.hpp"
#include "avgbin/duality.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/simulator.hpp"
#include "avgbin/uniformization.hpp"
#include "support.hpp"

using namespace avgbin;

TEST_CASE("duality function examples") {
  const auto pi = uniform_weights(2);
  const std::vector<double> eta{1.0, 0.0};
  const std::vector<Vertex> x0{0};
  CHECK(moment_duality(x0, eta, pi) == 2.0);
  CounterRng rng(12, 0);
  const auto p3 = random_elliptic_weights(3, 2.0, 1);
  const auto e3 = random_simplex_point(3, rng);
  const std::vector<Vertex> xs{0, 2, 2};
  CHECK(moment_duality(xs, p3.values(), p3) == doctest::Approx(1.0));
  CHECK(orthogonal_duality(xs, p3.values(), p3) == 0.0);
  double prod = 1.0, prod_bar = 1.0;
  for (Vertex x : xs) prod *= e3[x] / p3[x], prod_bar *= e3[x] / p3[x] - 1.0;
  CHECK(moment_duality(xs, e3.values(), p3) == doctest::Approx(prod));
  CHECK(orthogonal_duality(xs, e3.values(), p3) == doctest::Approx(prod_bar));
  // Mean zero in each coordinate.
  double s = 0.0;
  for (Vertex x = 0; x < 3; ++x) {
    const std::vector<Vertex> one{x};
    s += p3[x] * orthogonal_duality(one, e3.values(), p3);
  }
  CHECK(std::abs(s) < 1e-15);
}

TEST_CASE("falling factorials") {
  const ParticleConfig xi{2, 1};
  CHECK(falling_factorial(xi, std::vector<Vertex>{0, 0}) == 2);
  CHECK(falling_factorial(xi, std::vector<Vertex>{0, 1}) == 2);
  CHECK(falling_factorial(xi, std::vector<Vertex>{1, 1}) == 0);
  CHECK(falling_factorial(xi, std::vector<Vertex>{0, 0, 0}) == 0);
  CHECK(falling_factorial(ParticleConfig{0, 3}, std::vector<Vertex>{0}) == 0);
}

TEST_CASE("multinomial integration and binomial edge kernel") {
  const UnlabeledSpace s(3, 4);
  const std::vector<double> eta{0.2, 0.5, 0.3};
  std::vector<double> one(s.size(), 1.0), count(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) count[i] = s.config(i)[1];
  CHECK(lambda_apply(one, s, eta) == doctest::Approx(1.0));
  CHECK(lambda_apply(count, s, eta) == doctest::Approx(4 * 0.5));
  const UnlabeledSpace s2(2, 2);
  std::vector<double> ind(s2.size(), 0.0);
  ind[0] = 1.0;
  CHECK(lambda_apply(ind, s2, std::vector<double>{1.0, 0.0}) == 1.0);

  const SiteWeights pi({0.3, 0.7});
  std::vector<double> at_x(s2.size());
  for (std::size_t i = 0; i < s2.size(); ++i) at_x[i] = s2.config(i)[0];
  CHECK(p_bin_edge_apply(at_x, s2, ParticleConfig{2, 0}, 0, 1, pi) == doctest::Approx(2 * 0.3));
  const std::vector<double> one2(s2.size(), 1.0);
  CHECK(p_bin_edge_apply(one2, s2, ParticleConfig{1, 1}, 0, 1, pi) == doctest::Approx(1.0));
}

TEST_CASE("property: intertwining on random graphs") {
  CounterRng rng(13, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + test::uniform_index(rng, 3), k = 1 + test::uniform_index(rng, 3);
    const auto g = test::random_connected_graph(n, rng);
    const auto pi = test::random_weights(n, rng);
    const UnlabeledSpace s(n, k);
    const auto f = test::random_values(s.size(), rng);
    CHECK(intertwining_residual(g, pi, s, f, random_simplex_point(n, rng)) < 1e-12);
  }
}

TEST_CASE("a broken update breaks intertwining and duality") {
  const auto g = cycle_graph(3);
  const auto pi = random_elliptic_weights(3, 2.0, 2);
  // Sign error: the pooled mass is split with the weights swapped.
  const EdgeUpdateFn broken = [](const SimplexPoint& eta, Vertex x, Vertex y, const SiteWeights& w) {
    std::vector<double> v(eta.values().begin(), eta.values().end());
    const double m = v[x] + v[y];
    v[x] = m * w[y] / (w[x] + w[y]);
    v[y] = m - v[x];
    return SimplexPoint(v);
  };
  CounterRng rng(14, 0);
  const UnlabeledSpace s(3, 2);
  const auto f = test::random_values(s.size(), rng);
  const auto eta = random_simplex_point(3, rng);
  CHECK(intertwining_residual(g, pi, s, f, eta, broken) > 1e-3);
  const std::vector<Vertex> xs{0, 1};
  CHECK(duality_generator_residual(g, pi, xs, eta, false, broken) > 1e-3);
}

TEST_CASE("annihilation, creation and symmetrization") {
  CounterRng rng(15, 0);
  const auto pi = random_elliptic_weights(3, 2.0, 4);
  const TensorFunction psi(3, 2, test::random_values(9, rng));
  const auto up = annihilate(psi, 1);
  std::vector<Vertex> xs(3);
  for (std::size_t i = 0; i < up.size(); ++i) {
    tuple_from_index(i, 3, xs);
    const std::vector<Vertex> rest{xs[0], xs[2]};
    CHECK(up[i] == psi.at(rest));
  }
  // create(annihilate(psi, i), i) = psi since pi sums to one.
  const auto back = create(up, 1, pi);
  for (std::size_t i = 0; i < psi.size(); ++i) CHECK(back[i] == doctest::Approx(psi[i]).epsilon(1e-14));
  const auto eta = random_simplex_point(3, rng);
  const auto dbar = duality_tensor(eta.values(), pi, 3, true);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto created = create(dbar, i, pi);
    for (double v : created.values()) CHECK(std::abs(v) < 1e-12);
  }
  const auto sym = sym_project(TensorFunction(3, 3, test::random_values(27, rng)));
  CHECK(sym.exact);
  const auto sym2 = sym_project(sym.value);
  for (std::size_t i = 0; i < 27; ++i) CHECK(std::abs(sym2.value[i] - sym.value[i]) < 1e-12);
  CHECK_THROWS(annihilate(psi, 3));
  CHECK_THROWS(create(psi, 2, pi));
}

TEST_CASE("J_k maps the constant to k") {
  const UnlabeledSpace from(4, 2), to(4, 3);
  const std::vector<double> one(from.size(), 1.0);
  for (double v : jk_apply(one, from, to)) CHECK(v == 3.0);
}

TEST_CASE("f_psi vanishes at equilibrium") {
  CounterRng rng(16, 0);
  const auto pi = random_elliptic_weights(3, 2.0, 5);
  const TensorFunction psi(3, 2, test::random_values(9, rng));
  CHECK(std::abs(f_psi_eval(psi, pi.values(), pi)) < 1e-15);
}

TEST_CASE("self-duality residual") {
  CHECK(selfduality_residual(cycle_graph(3), uniform_weights(3), 1, 2, 0.0, 1e-9) == 0.0);
  CHECK(selfduality_residual(cycle_graph(3), uniform_weights(3), 1, 2, 0.7, 1e-9) <= 1e-8);
  CHECK(selfduality_residual(path_graph(2), uniform_weights(2), 2, 2, 1.3, 1e-9) <= 1e-8);
}

TEST_CASE("time-level moment duality by Monte Carlo") {
  // E_eta D(xs, eta_t) = (S_t^{Bin(k), labeled} D(., eta))(xs)
  const auto g = cycle_graph(4);
  const auto pi = random_elliptic_weights(4, 2.0, 6);
  const std::vector<double> eta0{0.7, 0.1, 0.1, 0.1};
  const std::vector<Vertex> xs{0, 1};
  const double t = 0.8;
  const auto d = duality_tensor(eta0, pi, 2, false);
  const auto sd = semigroup_apply(generator_bin_labeled(g, pi, 2), d.values(), t, 1e-13);
  const double exact = sd[tuple_index(xs, 4)];
  std::vector<double> samples(20000);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    SimOptions o;
    o.t_end = t;
    o.seed = 99;
    o.replica_id = r;
    const auto eta = simulate_averaging(g, pi, SimplexPoint(eta0), o).back();
    samples[r] = moment_duality(xs, eta.values(), pi);
  }
  const auto est = summarize(samples);
  CHECK(std::abs(est.mean - exact) < 4.0 * est.std_err);
}

TEST_CASE("multicolored intertwining holds per edge") {
  CounterRng rng(17, 0);
  const auto g = cycle_graph(3);
  const auto pi = random_elliptic_weights(3, 2.0, 7);
  const ParticleConfig xi{1, 0, 2};
  std::vector<std::vector<double>> f(3);
  f[0] = test::random_values(count_configs(3, 1), rng);
  f[2] = test::random_values(count_configs(3, 2), rng);
  std::vector<SimplexPoint> etas;
  for (int z = 0; z < 3; ++z) etas.push_back(random_simplex_point(3, rng));
  for (std::size_t e = 0; e < 3; ++e) CHECK(multicolor_intertwining_residual(g, pi, xi, f, etas, e) < 1e-12);
}
