#include "avgbin/wilson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "avgbin/binomial.hpp"
#include "avgbin/kernels.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/simulator.hpp"
#include "avgbin/spectral.hpp"
#include "avgbin/uniformization.hpp"

namespace avgbin {

namespace {

// Multinomial(k, eta) by sequential conditional Binomials.
ParticleConfig sample_multinomial(std::size_t k, std::span<const double> eta, CounterRng& rng) {
  ParticleConfig xi(eta.size(), 0);
  auto left = static_cast<std::uint32_t>(k);
  double mass_left = 1.0;
  for (std::size_t x = 0; x + 1 < eta.size() && left > 0; ++x) {
    const double p = mass_left > 0.0 ? std::clamp(eta[x] / mass_left, 0.0, 1.0) : 0.0;
    xi[x] = sample_binomial(left, p, rng);
    left -= xi[x];
    mass_left -= eta[x];
  }
  if (!eta.empty()) xi.back() += left;
  return xi;
}

}  // namespace

WilsonReport wilson_report(const WeightedGraph& g, const SiteWeights& pi, std::size_t k,
                           std::span<const double> eta, double t, double tol) {
  return wilson_report(g, pi, spectrum_bin1(g, pi), k, eta, t, tol);
}

WilsonReport wilson_report(const WeightedGraph& g, const SiteWeights& pi, const Spectrum& spec, std::size_t k,
                           std::span<const double> eta, double t, double tol) {
  const std::size_t n = g.num_vertices();
  if (eta.size() != n || pi.size() != n || spec.psi.size() != n)
    throw std::invalid_argument("wilson_report: size mismatch");
  if (!(t >= 0.0)) throw std::invalid_argument("wilson_report: t must be >= 0");
  WilsonReport r;
  r.k = k;
  r.t = t;
  r.t_rel = spec.t_rel;
  r.psi = spec.psi;
  const auto kd = static_cast<double>(k);

  double m1 = 0.0, m2 = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    m1 += pi[x] * r.psi[x];
    m2 += pi[x] * r.psi[x] * r.psi[x];
  }
  r.eq_mean = kd * m1;
  r.eq_var = kd * m2 - kd * m1 * m1;

  for (std::size_t x = 0; x < n; ++x) {
    r.psi_dot_d += r.psi[x] * eta[x];
    r.d_sup = std::max(r.d_sup, eta[x] / pi[x]);
  }
  const double decay = std::exp(-t / r.t_rel);
  r.mean = kd * decay * r.psi_dot_d;
  r.a_t = kd * r.psi_dot_d * r.psi_dot_d /
          (1.0 + kd / static_cast<double>(n) * (r.d_sup * r.d_sup + std::exp(t / r.t_rel)));
  r.bound = std::max(0.0, 1.0 - 8.0 / r.a_t);

  if (n * n > kTransientCap) {
    r.var_exact = std::numeric_limits<double>::quiet_NaN();
    r.r_sq = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  // Particles start i.i.d. from eta: one-particle law nu = eta S_t, pair law
  // rho = (eta (x) eta) S_t^{Bin(2)}.
  TransientOptions opts;
  opts.tol = tol;
  const auto nu = transient_distribution(generator_bin1(g, pi), eta, t, opts);
  std::vector<double> eta2(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) eta2[x * n + y] = eta[x] * eta[y];
  const auto rho = transient_distribution(generator_bin_labeled(g, pi, 2, kTransientCap), eta2, t, opts);
  double e1 = 0.0, e_sq = 0.0, pair = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    e1 += nu[x] * r.psi[x];
    e_sq += nu[x] * r.psi[x] * r.psi[x];
    for (std::size_t y = 0; y < n; ++y) pair += rho[x * n + y] * r.psi[x] * r.psi[y];
  }
  r.var_exact = kd * e_sq + kd * (kd - 1.0) * pair - kd * kd * e1 * e1;
  const double sigma_sq = 0.5 * (r.eq_var + r.var_exact);
  const double delta = r.mean - r.eq_mean;
  r.r_sq = sigma_sq > 0.0 ? delta * delta / sigma_sq : std::numeric_limits<double>::infinity();
  r.exact_bound = std::max(0.0, 1.0 - 8.0 / r.r_sq);
  return r;
}

McEstimate wilson_mc_mean(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> psi, std::size_t k,
                          std::span<const double> eta, double t, std::size_t replicas, std::uint64_t seed,
                          int threads) {
  if (replicas < 2) throw std::invalid_argument("wilson_mc_mean: need at least 2 replicas");
  const std::size_t n = g.num_vertices();
  if (psi.size() != n || eta.size() != n) throw std::invalid_argument("wilson_mc_mean: size mismatch");
  std::vector<double> samples(replicas);
  kernels::for_each_replica(replicas, threads, [&](std::size_t r) {
    // The initial draw uses a stream disjoint from the dynamics streams.
    CounterRng init_rng(seed, (std::uint64_t{1} << 63) | r);
    const ParticleConfig xi0 = sample_multinomial(k, eta, init_rng);
    SimOptions opts;
    opts.t_end = t;
    opts.seed = seed;
    opts.replica_id = r;
    opts.mode = CouplingMode::fast_binomial;
    const ParticleConfig xi = simulate_bin(g, pi, xi0, opts).back();
    double f = 0.0;
    for (std::size_t x = 0; x < n; ++x) f += psi[x] * xi[x];
    samples[r] = f;
  });
  return summarize(samples);
}

}  // namespace avgbin
