#pragma once

#include <span>

#include "avgbin/graphs.hpp"
#include "avgbin/rate_matrix.hpp"

namespace avgbin {

// <psi, -Q psi>_mu for Q reversible w.r.t. mu, evaluated as
// 1/2 sum_{i != j} mu_i Q_ij (psi_i - psi_j)^2 so the result is never
// negative through cancellation.
double dirichlet_form(const RateMatrix& q, std::span<const double> mu, std::span<const double> psi);

// sum_xy c_xy pi(x) pi(y) / (pi(x) + pi(y)) (psi(x) - psi(y))^2
double dirichlet_bin1(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> psi);

// sum_xy c_xy (pi(x) pi(y) / (pi(x) + pi(y)))^2
//        (psi(x,x) + psi(y,y) - psi(x,y) - psi(y,x))^2
// for psi2 over V^2 in tuple order. This is the gap between the two-particle
// Binomial Splitting form and the form of two independent particles.
double f_bin2_form(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> psi2);

}  // namespace avgbin
