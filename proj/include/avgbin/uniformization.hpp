#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "avgbin/rate_matrix.hpp"

namespace avgbin {

// Poisson(a) weights e^{-a} a^m / m! for m = 0..M, with M the first index at
// which the remaining tail mass drops below tol. Computed in the log domain.
std::vector<double> poisson_weights(double a, double tol);

struct TransientOptions {
  double tol = 1e-10;
  std::size_t cap = kTransientCap;
  bool parallel = true;
};

// init * e^{tQ} by uniformization with P = I + Q/Lambda, Lambda the largest
// exit rate. Entries are nonnegative and sum to 1 - (at most tol).
std::vector<double> transient_distribution(const RateMatrix& q, std::span<const double> init, double t,
                                           double tol = 1e-10);
std::vector<double> transient_distribution(const RateMatrix& q, std::span<const double> init, double t,
                                           const TransientOptions& opts);
// e^{tQ} f: the semigroup acting on functions. Sup-norm error <= tol * |f|_inf.
std::vector<double> semigroup_apply(const RateMatrix& q, std::span<const double> f, double t, double tol = 1e-10);
std::vector<double> semigroup_apply(const RateMatrix& q, std::span<const double> f, double t,
                                    const TransientOptions& opts);

// Distributions at each of the increasing times, each obtained from the
// previous one over the time increment; total truncation error is at most
// times.size() * tol.
std::vector<std::vector<double>> transient_path(const RateMatrix& q, std::span<const double> init,
                                                std::span<const double> times, const TransientOptions& opts = {});

}  // namespace avgbin
