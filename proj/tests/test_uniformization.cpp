#include <doctest.h>

#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "avgbin/distance.hpp"
#include "avgbin/uniformization.hpp"
#include "support.hpp"

using namespace avgbin;

TEST_CASE("poisson weights") {
  for (double a : {0.0, 0.3, 5.0, 200.0, 5000.0}) {
    const auto w = poisson_weights(a, 1e-12);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(sum <= 1.0 + 1e-12);
    CHECK(sum >= 1.0 - 1e-12 - 1e-13);
  }
  const auto w = poisson_weights(2.0, 1e-15);
  CHECK(w[3] == doctest::Approx(std::exp(-2.0) * 8.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("property: transient law matches the matrix exponential") {
  CounterRng rng(6, 0);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + test::uniform_index(rng, 3), k = 1 + test::uniform_index(rng, 3);
    const auto g = test::random_connected_graph(n, rng);
    const auto pi = test::random_weights(n, rng);
    const UnlabeledSpace s(n, k);
    const auto q = generator_bin_unlabeled(g, pi, s);
    const double t = 3.0 * rng.uniform();
    const Eigen::MatrixXd expm = (t * q.to_dense()).exp();
    std::vector<double> init(s.size(), 0.0);
    const std::size_t start = test::uniform_index(rng, s.size());
    init[start] = 1.0;
    const auto p = transient_distribution(q, init, t, 1e-13);
    const auto f = test::random_values(s.size(), rng);
    const auto sf = semigroup_apply(q, f, t, 1e-13);
    const Eigen::VectorXd sf_ref = expm * Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
    for (std::size_t j = 0; j < s.size(); ++j) {
      CHECK(std::abs(p[j] - expm(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(j))) < 1e-11);
      CHECK(std::abs(sf[j] - sf_ref(static_cast<Eigen::Index>(j))) < 1e-11);
    }
  }
}

TEST_CASE("transient path equals independent evaluations") {
  const auto g = cycle_graph(4);
  const auto pi = uniform_weights(4);
  const UnlabeledSpace s(4, 3);
  const auto q = generator_bin_unlabeled(g, pi, s);
  std::vector<double> init(s.size(), 0.0);
  init[0] = 1.0;
  const std::vector<double> times{0.0, 0.4, 1.1, 2.5};
  TransientOptions opts;
  opts.tol = 1e-13;
  const auto path = transient_path(q, init, times, opts);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto direct = transient_distribution(q, init, times[i], 1e-13);
    for (std::size_t j = 0; j < s.size(); ++j) CHECK(std::abs(path[i][j] - direct[j]) < 1e-11);
  }
}

TEST_CASE("serial and OpenMP uniformization agree bit for bit") {
  const auto model = make_bin_model(cycle_graph(6), uniform_weights(6), 16);  // 20349 states
  std::vector<double> init(model.q.dim(), 0.0);
  init[0] = 1.0;
  TransientOptions par, ser;
  ser.parallel = false;
  CHECK(transient_distribution(model.q, init, 1.5, par) == transient_distribution(model.q, init, 1.5, ser));
}

TEST_CASE("tolerance and size validation") {
  const auto q = generator_bin1(cycle_graph(3), uniform_weights(3));
  const std::vector<double> init{1.0, 0.0, 0.0};
  CHECK_THROWS(transient_distribution(q, init, 1.0, 1e-3));
  CHECK_THROWS(transient_distribution(q, init, -1.0));
  TransientOptions small;
  small.cap = 2;
  CHECK_THROWS_AS(transient_distribution(q, init, 1.0, small), SizeLimitError);
}
