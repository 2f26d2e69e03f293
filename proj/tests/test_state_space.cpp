#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "avgbin/state_space.hpp"
#include "support.hpp"

using namespace avgbin;

TEST_CASE("configuration counts") {
  CHECK(count_configs(5, 32) == 58905);
  CHECK(count_configs(3, 0) == 1);
  CHECK(count_configs(1, 7) == 1);
  CHECK(count_tuples(3, 4) == 81);
  CHECK(count_configs(1000, 1000) == UINT64_MAX);
}

TEST_CASE("descending lexicographic order and ranking") {
  const UnlabeledSpace s(3, 2);
  REQUIRE(s.size() == 6);
  const std::vector<std::vector<std::uint32_t>> expected{{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                                         {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = s.config(i);
    CHECK(std::vector<std::uint32_t>(c.begin(), c.end()) == expected[i]);
  }
}

TEST_CASE("property: index inverts enumeration") {
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t k = 0; k <= 6; ++k) {
      const UnlabeledSpace s(n, k);
      REQUIRE(s.size() == count_configs(n, k));
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.index(s.config(i)) == i);
        if (i > 0) {
          const auto a = s.config(i - 1), b = s.config(i);
          CHECK(std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()));
        }
      }
    }
}

TEST_CASE("invalid configurations and caps") {
  const UnlabeledSpace s(3, 2);
  const std::vector<std::uint32_t> bad{1, 0, 0};
  CHECK_THROWS_AS(s.index(bad), std::invalid_argument);
  CHECK_THROWS_AS(UnlabeledSpace(10, 40), SizeLimitError);
  try {
    UnlabeledSpace(10, 40, 1000);
  } catch (const SizeLimitError& e) {
    CHECK(e.cap() == 1000);
    CHECK(e.requested() == count_configs(10, 40));
  }
}

TEST_CASE("tuple indexing") {
  std::vector<Vertex> xs(3);
  for (std::size_t i = 0; i < 27; ++i) {
    tuple_from_index(i, 3, xs);
    CHECK(tuple_index(xs, 3) == i);
  }
  const std::vector<Vertex> t{2, 0, 2};
  CHECK(tuple_index(t, 3) == 2 * 9 + 0 * 3 + 2);
  CHECK(occupation_of(t, 3) == ParticleConfig{1, 0, 2});
}

TEST_CASE("multinomial measure") {
  CounterRng rng(5, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + test::uniform_index(rng, 3), k = 1 + test::uniform_index(rng, 5);
    const auto pi = test::random_weights(n, rng);
    const UnlabeledSpace s(n, k);
    const auto mu = multinomial_measure(pi, s);
    CHECK(std::accumulate(mu.begin(), mu.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    // Lumping the product measure gives the multinomial.
    std::vector<double> lumped(s.size(), 0.0);
    const auto prod = product_measure(pi.values(), k);
    std::vector<Vertex> xs(k);
    for (std::size_t i = 0; i < prod.size(); ++i) {
      tuple_from_index(i, n, xs);
      lumped[s.index(occupation_of(xs, n))] += prod[i];
    }
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(mu[i] == doctest::Approx(lumped[i]).epsilon(1e-12));
  }
  // 0^0 = 1: a degenerate vector puts all mass on one configuration.
  const std::vector<double> p{1.0, 0.0};
  const std::vector<std::uint32_t> xi{3, 0}, other{2, 1};
  CHECK(multinomial_pmf(p, xi) == 1.0);
  CHECK(multinomial_pmf(p, other) == 0.0);
}
