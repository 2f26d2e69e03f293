#include <doctest.h>

#include <cmath>

#include "avgbin/distance.hpp"
#include "avgbin/nash.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/uniformization.hpp"
#include "avgbin/wilson.hpp"
#include "support.hpp"

using namespace avgbin;

TEST_CASE("equilibrium moments of the Wilson statistic") {
  for (std::size_t k : {1, 5, 10, 40}) {
    const auto g = cycle_graph(5);
    const auto pi = random_elliptic_weights(5, 2.0, k);
    const auto r = wilson_report(g, pi, k, pi.values(), 0.0);
    CHECK(std::abs(r.eq_mean) <= 1e-10);
    CHECK(std::abs(r.eq_var - static_cast<double>(k)) <= 1e-10);
  }
}

TEST_CASE("exact moments agree with enumeration of Bin(k)") {
  const auto g = path_graph(4);
  const auto pi = random_elliptic_weights(4, 2.0, 22);
  const std::vector<double> eta{0.5, 0.3, 0.0, 0.2};
  const std::size_t k = 3;
  const double t = 0.8;
  const auto r = wilson_report(g, pi, k, eta, t);
  const UnlabeledSpace s(4, k);
  const auto p = transient_distribution(generator_bin_unlabeled(g, pi, s), multinomial_measure(eta, s), t, 1e-13);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double f = 0.0;
    for (std::size_t x = 0; x < 4; ++x) f += r.psi[x] * s.config(i)[x];
    m1 += p[i] * f;
    m2 += p[i] * f * f;
  }
  CHECK(r.mean == doctest::Approx(m1).epsilon(1e-9));
  CHECK(r.var_exact == doctest::Approx(m2 - m1 * m1).epsilon(1e-9));
  const double expected_a = k * r.psi_dot_d * r.psi_dot_d /
                            (1.0 + (k / 4.0) * (r.d_sup * r.d_sup + std::exp(t / r.t_rel)));
  CHECK(r.a_t == doctest::Approx(expected_a));
  CHECK(r.bound == std::max(0.0, 1.0 - 8.0 / expected_a));
  CHECK(r.exact_bound >= 0.0);
  CHECK(r.exact_bound <= 1.0);
}

TEST_CASE("Monte Carlo mean of the statistic") {
  const auto g = cycle_graph(5);
  const auto pi = uniform_weights(5);
  const std::vector<double> eta{1, 0, 0, 0, 0};
  const auto r = wilson_report(g, pi, 6, eta, 0.5);
  const auto mc = wilson_mc_mean(g, pi, r.psi, 6, eta, 0.5, 20000, 4, 0);
  CHECK(std::abs(mc.mean - r.mean) < 4.0 * mc.std_err);
}

TEST_CASE("Nash fit recovers an exact power law") {
  const double d = 1.7, tn = 3.0;
  std::vector<double> times, h;
  for (int i = 0; i < 30; ++i) {
    const double t = 0.2 * std::pow(1.15, i);
    times.push_back(t);
    h.push_back(std::exp(1.0) * std::pow(d * tn / (2.0 * t), d / 2.0));
  }
  NashOptions opts;
  opts.upper_fraction = 1.0;
  opts.lower = 1.0;
  const auto fit = nash_fit_profile(times, h, 100.0, opts);
  CHECK(fit.d_hat == doctest::Approx(d).epsilon(1e-10));
  CHECK(fit.t_nash_hat == doctest::Approx(tn).epsilon(1e-9));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.finite_dimensional);
  const std::vector<double> few_t{1.0, 2.0}, few_h{3.0, 2.0};
  CHECK_THROWS_AS(nash_fit_profile(few_t, few_h, 10.0), NashFitError);
}

TEST_CASE("max heat kernel profile matches the diagonal heat kernel") {
  CounterRng rng(23, 0);
  const auto g = test::random_connected_graph(6, rng);
  const auto pi = test::random_weights(6, rng);
  const std::vector<double> times{0.3, 1.0, 2.5};
  const auto prof = max_heat_kernel_profile(g, pi, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double best = 0.0;
    for (Vertex x = 0; x < 6; ++x) best = std::max(best, heat_kernel(g, pi, x, times[i]).h[x]);
    CHECK(prof[i] == doctest::Approx(best).epsilon(1e-9));
  }
  const double t_rel = relaxation_time(g, pi);
  const std::vector<double> beyond{0.5 * t_rel, 2.0 * t_rel};
  CHECK_THROWS(nash_fit(g, pi, beyond));
}
