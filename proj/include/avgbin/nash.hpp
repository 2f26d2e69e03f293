#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "avgbin/graphs.hpp"

namespace avgbin {

class NashFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NashOptions {
  // Fit window: grid points with lower <= max h_t <= upper_fraction * (largest profile value).
  double lower = 1.05;
  double upper_fraction = 0.5;
  std::size_t min_points = 4;
  // A fit is flagged as not finite-dimensional when any of these fails.
  double min_r_squared = 0.95;
  double max_dimension = 8.0;
  double max_nash_over_trel = 4.0;
};

// Power-law fit max h_t ~ e (d t_Nash / 2t)^{d/2} of the on-diagonal decay.
struct NashFit {
  double d_hat = 0.0;
  double t_nash_hat = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  double t_rel = 0.0;
  bool finite_dimensional = true;
  std::string reason;  // why the fit was flagged; empty otherwise
};

// max_{x,y} h_t^x(y) = max_x h_t^x(x), from the dense eigendecomposition of
// the single-particle generator.
std::vector<double> max_heat_kernel_profile(const WeightedGraph& g, const SiteWeights& pi,
                                            std::span<const double> times);

// Regression of log h on log t over the window; d_hat = -2 slope and
// t_nash_hat = (2 / d_hat) exp((intercept - 1) 2 / d_hat). Throws
// NashFitError with fewer than min_points usable points.
NashFit nash_fit_profile(std::span<const double> times, std::span<const double> max_h, double t_rel,
                         const NashOptions& opts = {});
// Grid must lie in (0, t_rel].
NashFit nash_fit(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> t_grid,
                 const NashOptions& opts = {});

}  // namespace avgbin
