#include "avgbin/uniformization.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace avgbin {

namespace {

enum class Side { left, right };

void validate(const RateMatrix& q, std::span<const double> v, double t, const TransientOptions& opts) {
  if (v.size() != q.dim()) throw std::invalid_argument("uniformization: vector does not match the generator");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("uniformization: time must be finite and >= 0");
  if (!(opts.tol > 0.0 && opts.tol <= 1e-6)) throw std::invalid_argument("uniformization: tol must lie in (0, 1e-6]");
  if (q.dim() > opts.cap)
    throw SizeLimitError("transient vector of dimension " + std::to_string(q.dim()) + " exceeds the cap of " +
                             std::to_string(opts.cap) + "; use a bound-based profile instead",
                         q.dim(), opts.cap);
}

std::vector<double> uniformize(const RateMatrix& q, std::span<const double> v, double t, const TransientOptions& opts,
                               Side side) {
  validate(q, v, t, opts);
  std::vector<double> out(v.begin(), v.end());
  const double lambda = q.max_exit_rate();
  if (t == 0.0 || lambda == 0.0) return out;
  const std::vector<double> w = poisson_weights(lambda * t, opts.tol);
  const auto& a = side == Side::left ? q.offdiagonal_transpose() : q.offdiagonal();
  std::vector<double> cur(v.begin(), v.end()), next(v.size());
  for (double& o : out) o = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (m > 0) {
      if (opts.parallel)
        kernels::uniformized_step(a, q.diagonal(), lambda, cur, next);
      else
        kernels::uniformized_step_serial(a, q.diagonal(), lambda, cur, next);
      cur.swap(next);
    }
    if (opts.parallel)
      kernels::axpy(w[m], cur, out);
    else
      kernels::axpy_serial(w[m], cur, out);
  }
  return out;
}

}  // namespace

std::vector<double> poisson_weights(double a, double tol) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("poisson_weights: mean must be finite and >= 0");
  std::vector<double> w;
  if (a == 0.0) return {1.0};
  double mass = 0.0;
  const double log_a = std::log(a);
  // Past the mode the terms decay geometrically; the hard stop only guards
  // against a tol below rounding level.
  const double hard_stop = a + 60.0 * std::sqrt(a) + 200.0;
  for (std::size_t m = 0;; ++m) {
    const double term = std::exp(-a + static_cast<double>(m) * log_a - std::lgamma(static_cast<double>(m) + 1.0));
    w.push_back(term);
    mass += term;
    if ((static_cast<double>(m) > a && 1.0 - mass < tol) || static_cast<double>(m) > hard_stop) break;
  }
  return w;
}

std::vector<double> transient_distribution(const RateMatrix& q, std::span<const double> init, double t, double tol) {
  return transient_distribution(q, init, t, TransientOptions{tol});
}

std::vector<double> transient_distribution(const RateMatrix& q, std::span<const double> init, double t,
                                           const TransientOptions& opts) {
  return uniformize(q, init, t, opts, Side::left);
}

std::vector<double> semigroup_apply(const RateMatrix& q, std::span<const double> f, double t, double tol) {
  return semigroup_apply(q, f, t, TransientOptions{tol});
}

std::vector<double> semigroup_apply(const RateMatrix& q, std::span<const double> f, double t,
                                    const TransientOptions& opts) {
  return uniformize(q, f, t, opts, Side::right);
}

std::vector<std::vector<double>> transient_path(const RateMatrix& q, std::span<const double> init,
                                                std::span<const double> times, const TransientOptions& opts) {
  std::vector<std::vector<double>> out;
  out.reserve(times.size());
  std::vector<double> cur(init.begin(), init.end());
  double t_prev = 0.0;
  for (double t : times) {
    if (t < t_prev) throw std::invalid_argument("transient_path: times must be nondecreasing and >= 0");
    cur = uniformize(q, cur, t - t_prev, opts, Side::left);
    out.push_back(cur);
    t_prev = t;
  }
  return out;
}

}  // namespace avgbin
