#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "avgbin/spectral.hpp"
#include "support.hpp"

using namespace avgbin;

// Unit conductances and uniform weights: every edge moves the particle at
// rate 1/2 in each direction, so the gaps are those of the simple random
// walk scaled by 1/2.
TEST_CASE("closed-form gaps") {
  for (std::size_t n = 3; n <= 12; ++n) {
    CHECK(spectrum_bin1(cycle_graph(n), uniform_weights(n)).gap ==
          doctest::Approx(1.0 - std::cos(2.0 * std::numbers::pi / n)).epsilon(1e-12));
    CHECK(spectrum_bin1(path_graph(n), uniform_weights(n)).gap ==
          doctest::Approx(1.0 - std::cos(std::numbers::pi / n)).epsilon(1e-12));
  }
  for (std::size_t n = 3; n <= 8; ++n)
    CHECK(std::abs(spectrum_bin1(complete_graph(n), uniform_weights(n)).gap - n / 2.0) <= 1e-10);
}

TEST_CASE("psi is a unit, mean-zero gap eigenfunction with canonical sign") {
  CounterRng rng(4, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + test::uniform_index(rng, 6);
    const auto g = test::random_connected_graph(n, rng);
    const auto pi = test::random_weights(n, rng);
    const auto s = spectrum_bin1(g, pi);
    const Eigen::MatrixXd q = test::bin1_dense(g, pi);
    Eigen::VectorXd psi = Eigen::Map<const Eigen::VectorXd>(s.psi.data(), static_cast<Eigen::Index>(n));
    CHECK((q * psi + s.gap * psi).cwiseAbs().maxCoeff() < 1e-10);
    double norm = 0.0, mean = 0.0;
    for (std::size_t x = 0; x < n; ++x) norm += pi[x] * s.psi[x] * s.psi[x], mean += pi[x] * s.psi[x];
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(mean) < 1e-12);
    std::size_t first = 0;
    while (std::abs(s.psi[first]) < 1e-14) ++first;
    CHECK(s.psi[first] > 0.0);
    CHECK(s.t_rel == doctest::Approx(1.0 / s.gap));
  }
}

TEST_CASE("eigenvalues agree with a general eigensolver") {
  CounterRng rng(5, 0);
  const auto g = test::random_connected_graph(7, rng);
  const auto pi = test::random_weights(7, rng);
  const auto s = spectrum_bin1(g, pi);
  Eigen::EigenSolver<Eigen::MatrixXd> es(-test::bin1_dense(g, pi));
  std::vector<double> ev;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end());
  REQUIRE(ev.size() == s.eigenvalues.size());
  for (std::size_t i = 0; i < ev.size(); ++i) CHECK(s.eigenvalues[i] == doctest::Approx(ev[i]).epsilon(1e-9));
}

TEST_CASE("iterative mode agrees with dense mode") {
  const auto g = cycle_graph(6);
  const auto pi = random_elliptic_weights(6, 2.0, 3);
  const UnlabeledSpace space(6, 5);  // 252 states
  const auto q = generator_bin_unlabeled(g, pi, space);
  const auto mu = multinomial_measure(pi, space);
  SpectralOptions iterative;
  iterative.dense_limit = 10;
  const auto dense = spectral_gap(q, mu);
  const auto it = spectral_gap(q, mu, iterative);
  CHECK_FALSE(it.dense);
  CHECK(it.gap == doctest::Approx(dense.gap).epsilon(1e-8));
}

TEST_CASE("degenerate gap eigenspace is orthonormal") {
  const auto s = spectrum_bin1(cycle_graph(6), uniform_weights(6));
  REQUIRE(s.gap_eigenspace.size() == 2);
  double dot = 0.0;
  for (std::size_t x = 0; x < 6; ++x) dot += s.gap_eigenspace[0][x] * s.gap_eigenspace[1][x] / 6.0;
  CHECK(std::abs(dot) < 1e-12);
}

TEST_CASE("non-reversible generators are rejected") {
  Eigen::MatrixXd q(3, 3);
  q << 0, 1, 0, 0, 0, 1, 1, 0, 0;  // a directed cycle
  const std::vector<double> mu{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK_THROWS_AS(spectral_gap(RateMatrix::from_dense(q), mu), NonReversibleError);
}
