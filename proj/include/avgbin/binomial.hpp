#pragma once

#include <cstdint>
#include <vector>

#include "avgbin/rng.hpp"

namespace avgbin {

// Binomial(m, p) probability mass function, exact at p in {0, 1}.
std::vector<double> binomial_pmf(std::uint32_t m, double p);

// Exact Binomial(m, p) variate. With q = min(p, 1-p): sequential inversion
// when m <= 64 or m*q < 10, Hormann's BTRS transformed rejection otherwise
// (its acceptance test is exact, so no normal approximation is involved).
std::uint32_t sample_binomial(std::uint32_t m, double p, CounterRng& rng);

}  // namespace avgbin
