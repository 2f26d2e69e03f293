#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "avgbin/distance.hpp"
#include "avgbin/graphs.hpp"
#include "avgbin/spectral.hpp"

namespace avgbin {

// Distinguishing statistic F(xi) = sum_x psi(x) xi(x), psi the canonical
// unit gap eigenfunction of the single particle.
struct WilsonReport {
  std::size_t k = 0;
  double t = 0.0;
  double t_rel = 0.0;
  std::vector<double> psi;
  // Under mu_{k,pi}, from the multinomial mean and covariances.
  double eq_mean = 0.0;
  double eq_var = 0.0;
  // <psi, D(., eta)> and |D(., eta)|_inf with D(x, eta) = eta(x)/pi(x).
  double psi_dot_d = 0.0;
  double d_sup = 0.0;
  // Under mu_{k,eta} S_t: k e^{-t/t_rel} <psi, D(., eta)>.
  double mean = 0.0;
  // Exact variance under mu_{k,eta} S_t from the one- and two-particle
  // laws; NaN when n^2 exceeds the transient cap.
  double var_exact = 0.0;
  // k <psi,D>^2 / (1 + (k/n)(|D|_inf^2 + e^{t/t_rel})) and max(0, 1 - 8/a_t).
  double a_t = 0.0;
  double bound = 0.0;
  // Chebyshev bound with exact moments: r^2 = (mean - eq_mean)^2 / sigma_*^2,
  // sigma_*^2 = (eq_var + var_exact)/2, bound max(0, 1 - 8/r^2).
  double r_sq = 0.0;
  double exact_bound = 0.0;
};

WilsonReport wilson_report(const WeightedGraph& g, const SiteWeights& pi, std::size_t k,
                           std::span<const double> eta, double t, double tol = 1e-12);
// Same with the single-particle spectrum supplied, for repeated calls.
WilsonReport wilson_report(const WeightedGraph& g, const SiteWeights& pi, const Spectrum& bin1, std::size_t k,
                           std::span<const double> eta, double t, double tol = 1e-12);

// Monte Carlo mean of F(xi_t) with xi_0 ~ mu_{k,eta} and fast Binomial
// updates; replica r uses stream r of seed.
McEstimate wilson_mc_mean(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> psi, std::size_t k,
                          std::span<const double> eta, double t, std::size_t replicas, std::uint64_t seed,
                          int threads = 0);

}  // namespace avgbin
