#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "avgbin/binomial.hpp"

using namespace avgbin;

TEST_CASE("pmf") {
  const auto b = binomial_pmf(4, 0.3);
  CHECK(std::accumulate(b.begin(), b.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b[2] == doctest::Approx(6 * 0.09 * 0.49));
  CHECK(binomial_pmf(3, 0.0) == std::vector<double>{1, 0, 0, 0});
  CHECK(binomial_pmf(3, 1.0) == std::vector<double>{0, 0, 0, 1});
}

// Pearson chi-square against the exact pmf, cells with expected count < 5
// pooled into their neighbour.
double chi_square(std::uint32_t m, double p, int samples, std::uint64_t seed, int& dof) {
  const auto pmf = binomial_pmf(m, p);
  std::vector<double> counts(m + 1, 0.0);
  CounterRng rng(seed, 0);
  for (int i = 0; i < samples; ++i) counts[sample_binomial(m, p, rng)] += 1.0;
  double stat = 0.0, exp_acc = 0.0, obs_acc = 0.0;
  dof = -1;
  for (std::uint32_t j = 0; j <= m; ++j) {
    exp_acc += pmf[j] * samples;
    obs_acc += counts[j];
    if (exp_acc >= 5.0 || j == m) {
      stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / std::max(exp_acc, 1e-300);
      exp_acc = obs_acc = 0.0;
      ++dof;
    }
  }
  return stat;
}

TEST_CASE("samplers follow the exact law in both regimes") {
  struct Case {
    std::uint32_t m;
    double p;
  };
  // Inversion (small m or small m q) and BTRS (large m q).
  for (const Case c : {Case{5, 0.3}, Case{60, 0.5}, Case{1000, 0.002}, Case{200, 0.4}, Case{5000, 0.7},
                       Case{100000, 0.5}}) {
    int dof = 0;
    const double stat = chi_square(c.m, c.p, 200000, c.m, dof);
    // Loose upper quantile: mean dof, sd sqrt(2 dof).
    CHECK(stat < dof + 6.0 * std::sqrt(2.0 * dof) + 10.0);
  }
}

TEST_CASE("degenerate probabilities") {
  CounterRng rng(1, 1);
  CHECK(sample_binomial(10, 0.0, rng) == 0);
  CHECK(sample_binomial(10, 1.0, rng) == 10);
  CHECK(sample_binomial(0, 0.5, rng) == 0);
}
