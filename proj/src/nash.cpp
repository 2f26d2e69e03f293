#include "avgbin/nash.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "avgbin/rate_matrix.hpp"
#include "avgbin/spectral.hpp"

namespace avgbin {

std::vector<double> max_heat_kernel_profile(const WeightedGraph& g, const SiteWeights& pi,
                                            std::span<const double> times) {
  const Spectrum spec = spectral_gap(generator_bin1(g, pi), pi.values());
  if (!spec.dense) throw std::invalid_argument("max_heat_kernel_profile: needs the dense eigendecomposition");
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  const Eigen::MatrixXd sq = spec.eigenfunctions.array().square();
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("max_heat_kernel_profile: times must be >= 0");
    Eigen::VectorXd decay(n);
    for (Eigen::Index j = 0; j < n; ++j) decay[j] = std::exp(-spec.eigenvalues[j] * t);
    out.push_back((sq * decay).maxCoeff());
  }
  return out;
}

NashFit nash_fit_profile(std::span<const double> times, std::span<const double> max_h, double t_rel,
                         const NashOptions& opts) {
  if (times.size() != max_h.size()) throw std::invalid_argument("nash_fit_profile: size mismatch");
  if (times.empty()) throw NashFitError("nash fit: empty grid");
  const double top = *std::max_element(max_h.begin(), max_h.end());
  std::vector<double> lx, ly;
  NashFit fit;
  fit.t_rel = t_rel;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (max_h[i] < opts.lower || max_h[i] > opts.upper_fraction * top) continue;
    if (lx.empty()) fit.t_lo = times[i];
    fit.t_hi = times[i];
    lx.push_back(std::log(times[i]));
    ly.push_back(std::log(max_h[i]));
  }
  fit.points = lx.size();
  if (fit.points < opts.min_points) {
    std::ostringstream msg;
    msg << "nash fit: only " << fit.points << " grid points inside the window, need " << opts.min_points;
    throw NashFitError(msg.str());
  }
  const auto m = static_cast<double>(fit.points);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw NashFitError("nash fit: window holds a single time");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.d_hat = -2.0 * slope;
  if (fit.d_hat > 0.0) fit.t_nash_hat = (2.0 / fit.d_hat) * std::exp((intercept - 1.0) * 2.0 / fit.d_hat);

  std::ostringstream why;
  if (!(fit.d_hat > 0.0)) why << "non-decaying profile; ";
  if (fit.r_squared < opts.min_r_squared) why << "R^2 " << fit.r_squared << " < " << opts.min_r_squared << "; ";
  if (fit.d_hat > opts.max_dimension) why << "d_hat " << fit.d_hat << " > " << opts.max_dimension << "; ";
  if (fit.d_hat > 0.0 && fit.t_nash_hat > opts.max_nash_over_trel * t_rel)
    why << "t_nash_hat/t_rel " << fit.t_nash_hat / t_rel << " > " << opts.max_nash_over_trel << "; ";
  fit.reason = why.str();
  if (!fit.reason.empty()) fit.reason.resize(fit.reason.size() - 2);
  fit.finite_dimensional = fit.reason.empty();
  return fit;
}

NashFit nash_fit(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> t_grid,
                 const NashOptions& opts) {
  const double t_rel = relaxation_time(g, pi);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || t_grid[i] > t_rel * (1.0 + 1e-12))
      throw std::invalid_argument("nash_fit: grid must lie in (0, t_rel]");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("nash_fit: grid must increase");
  }
  return nash_fit_profile(t_grid, max_heat_kernel_profile(g, pi, t_grid), t_rel, opts);
}

}  // namespace avgbin
