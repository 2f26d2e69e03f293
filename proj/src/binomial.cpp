#include "avgbin/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace avgbin {

namespace {

// Inversion by sequential search from 0; q <= 1/2 and q^m >= e^{-10} or
// q^m >= 2^-64, so the first term never underflows.
std::uint32_t binomial_inversion(std::uint32_t m, double q, CounterRng& rng) {
  double u = rng.uniform();
  const double r = q / (1.0 - q);
  const double g = r * (m + 1.0);
  double f = std::pow(1.0 - q, static_cast<double>(m));
  std::uint32_t k = 0;
  while (u >= f) {
    u -= f;
    if (k == m) break;
    ++k;
    f *= g / k - r;
  }
  return k;
}

// Hormann (1993), "The generation of binomial random variates", algorithm
// BTRS; requires m * q >= 10 with q <= 1/2.
std::uint32_t binomial_btrs(std::uint32_t m, double q, CounterRng& rng) {
  const double n = m;
  const double spq = std::sqrt(n * q * (1 - q));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * q;
  const double c = n * q + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(q / (1 - q));
  const double mode = std::floor((n + 1) * q);
  const double h = std::lgamma(mode + 1) + std::lgamma(n - mode + 1);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2 * a / us + b) * u + c);
    if (k < 0 || k > n) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint32_t>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    // log of pmf(k) / pmf(mode), with lgamma in place of Stirling tails.
    const double bound = h - std::lgamma(k + 1) - std::lgamma(n - k + 1) + (k - mode) * lpq;
    if (v <= bound) return static_cast<std::uint32_t>(k);
  }
}

}  // namespace

std::vector<double> binomial_pmf(std::uint32_t m, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_pmf: p must lie in [0, 1]");
  std::vector<double> pmf(m + 1, 0.0);
  if (p == 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf[m] = 1.0;
    return pmf;
  }
  const double lp = std::log(p), lq = std::log1p(-p), lm = std::lgamma(m + 1.0);
  for (std::uint32_t j = 0; j <= m; ++j)
    pmf[j] = std::exp(lm - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) + j * lp + (m - j) * lq);
  return pmf;
}

std::uint32_t sample_binomial(std::uint32_t m, double p, CounterRng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_binomial: p must lie in [0, 1]");
  if (m == 0 || p == 0.0) return 0;
  if (p == 1.0) return m;
  const bool flip = p > 0.5;
  const double q = flip ? 1.0 - p : p;
  const std::uint32_t draw =
      (m <= 64 || m * q < 10.0) ? binomial_inversion(m, q, rng) : binomial_btrs(m, q, rng);
  return flip ? m - draw : draw;
}

}  // namespace avgbin
