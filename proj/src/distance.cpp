#include "avgbin/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "avgbin/kernels.hpp"
#include "avgbin/simulator.hpp"
#include "avgbin/uniformization.hpp"

namespace avgbin {

namespace {

void check_probability(std::span<const double> p, const char* what) {
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(s - 1.0) > 1e-8) throw std::invalid_argument(std::string(what) + ": vector does not sum to 1");
}

std::vector<double> ratio_to_weights(std::span<const double> eta, const SiteWeights& pi) {
  if (eta.size() != pi.size()) throw std::invalid_argument("eta and pi differ in length");
  std::vector<double> f(eta.size());
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = eta[x] / pi[x];
  return f;
}

// f (x) f on V^2 in tuple order.
std::vector<double> square_tensor(std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> out(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) out[x * n + y] = f[x] * f[y];
  return out;
}

TransientOptions transient_opts(double tol) {
  TransientOptions o;
  o.tol = tol;
  return o;
}

}  // namespace

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: dimension mismatch");
  check_probability(p, "tv_distance");
  check_probability(q, "tv_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

HeatKernel heat_kernel(const WeightedGraph& g, const SiteWeights& pi, Vertex x, double t, double tol) {
  const std::size_t n = g.num_vertices();
  if (x < 0 || static_cast<std::size_t>(x) >= n) throw std::invalid_argument("heat_kernel: vertex out of range");
  std::vector<double> init(n, 0.0);
  init[x] = 1.0;
  HeatKernel hk;
  hk.x = x;
  hk.t = t;
  hk.h = transient_distribution(generator_bin1(g, pi), init, t, tol);
  for (std::size_t y = 0; y < n; ++y) hk.h[y] /= pi[y];
  return hk;
}

std::vector<double> h_eta(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> eta, double t,
                          double tol) {
  return semigroup_apply(generator_bin1(g, pi), ratio_to_weights(eta, pi), t, tol);
}

double chi2_multinomial(std::span<const double> eta, const SiteWeights& pi, std::size_t k) {
  const double d2 = l2_distance_sq(eta, pi);
  const double log_ratio = static_cast<double>(k) * std::log1p(d2);
  if (log_ratio > std::log(std::numeric_limits<double>::max())) return std::numeric_limits<double>::infinity();
  return std::expm1(log_ratio);
}

double tv_bound_multinomial(std::span<const double> eta, const SiteWeights& pi, std::size_t k) {
  return std::min(1.0, std::sqrt(chi2_multinomial(eta, pi, k)));
}

double tv_multinomial_exact(std::span<const double> eta, const SiteWeights& pi, std::size_t k, std::size_t cap) {
  const UnlabeledSpace space(pi.size(), k, cap);
  return tv_distance(multinomial_measure(eta, space), multinomial_measure(pi, space));
}

double chi2_multinomial_enumerated(std::span<const double> eta, const SiteWeights& pi, std::size_t k,
                                   std::size_t cap) {
  const UnlabeledSpace space(pi.size(), k, cap);
  const auto a = multinomial_measure(eta, space);
  const auto b = multinomial_measure(pi, space);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i] / b[i];
  return s - 1.0;
}

BinModel make_bin_model(const WeightedGraph& g, const SiteWeights& pi, std::size_t k, std::size_t cap) {
  const std::uint64_t size = count_configs(g.num_vertices(), k);
  if (size > cap)
    throw SizeLimitError("Omega_k has " + std::to_string(size) + " states, over the cap of " + std::to_string(cap) +
                             "; use the bound-based profile instead",
                         size, cap);
  UnlabeledSpace space(g.num_vertices(), k, cap);
  RateMatrix q = generator_bin_unlabeled(g, pi, space);
  std::vector<double> mu = multinomial_measure(pi, space);
  return {std::move(space), std::move(q), std::move(mu)};
}

std::vector<ProfilePoint> tv_profile_exact(const BinModel& model, const ParticleConfig& xi0,
                                           std::span<const double> times, double tol) {
  std::vector<double> init(model.space.size(), 0.0);
  init[model.space.index(xi0)] = 1.0;
  TransientOptions opts = transient_opts(tol);
  opts.cap = std::max(opts.cap, model.space.size());
  const auto path = transient_path(model.q, init, times, opts);
  std::vector<ProfilePoint> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    // The truncated Poisson tail leaves up to times.size() * tol of mass
    // unaccounted; put it back before comparing.
    std::vector<double> p = path[i];
    const double mass = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= mass;
    out.push_back({times[i], tv_distance(p, model.mu)});
  }
  return out;
}

std::vector<ProfilePoint> tv_profile_exact(const WeightedGraph& g, const SiteWeights& pi, std::size_t k,
                                           const ParticleConfig& xi0, std::span<const double> times, double tol) {
  return tv_profile_exact(make_bin_model(g, pi, k), xi0, times, tol);
}

WorstPileProfile tv_profile_worst_pile(const BinModel& model, std::span<const double> times, double tol,
                                       std::size_t max_starts) {
  const std::size_t n = model.space.n();
  if (max_starts == 0) throw std::invalid_argument("tv_profile_worst_pile: max_starts must be positive");
  WorstPileProfile out;
  if (n <= max_starts) {
    for (std::size_t x = 0; x < n; ++x) out.tried.push_back(static_cast<Vertex>(x));
  } else {
    for (std::size_t i = 0; i < max_starts; ++i) out.tried.push_back(static_cast<Vertex>(i * n / max_starts));
  }
  for (Vertex x : out.tried) {
    ParticleConfig xi(n, 0);
    xi[x] = static_cast<std::uint32_t>(model.space.k());
    const auto prof = tv_profile_exact(model, xi, times, tol);
    if (out.profile.empty()) {
      out.profile = prof;
      out.argmax.assign(prof.size(), x);
      continue;
    }
    for (std::size_t i = 0; i < prof.size(); ++i)
      if (prof[i].value > out.profile[i].value) {
        out.profile[i].value = prof[i].value;
        out.argmax[i] = x;
      }
  }
  return out;
}

double tv_upper_bound_bin(std::size_t k, double w2_sq) {
  if (!(w2_sq >= 0.0)) throw std::invalid_argument("tv_upper_bound_bin: w2_sq must be >= 0");
  return std::min(1.0, std::sqrt(std::numbers::e * static_cast<double>(k) * w2_sq));
}

McEstimate summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  // Shifted sums: identical samples give exactly that value and zero error.
  const double shift = values.front();
  double s = 0.0, s2 = 0.0;
  for (double v : values) {
    const double d = v - shift;
    s += d;
    s2 += d * d;
  }
  const auto r = static_cast<double>(values.size());
  McEstimate est;
  est.mean = shift + s / r;
  if (values.size() > 1) {
    const double var = std::max(0.0, (s2 - s * s / r) / (r - 1.0));
    est.std_err = std::sqrt(var / r);
  }
  return est;
}

McEstimate wasserstein_estimate(const WeightedGraph& g, const SiteWeights& pi, const SimplexPoint& eta0, double t,
                                double p, std::size_t replicas, std::uint64_t seed, int threads) {
  const double times[] = {t};
  return wasserstein_profile(g, pi, eta0, times, p, replicas, seed, threads).front();
}

std::vector<McEstimate> wasserstein_profile(const WeightedGraph& g, const SiteWeights& pi, const SimplexPoint& eta0,
                                            std::span<const double> times, double p, std::size_t replicas,
                                            std::uint64_t seed, int threads) {
  if (replicas < 2) throw std::invalid_argument("wasserstein_profile: need at least 2 replicas");
  if (times.empty()) return {};
  const std::size_t m = times.size();
  std::vector<double> samples(replicas * m);
  kernels::for_each_replica(replicas, threads, [&](std::size_t r) {
    SimOptions opts;
    opts.t_end = times.back();
    opts.record_times.assign(times.begin(), times.end());
    opts.seed = seed;
    opts.replica_id = r;
    const auto path = simulate_averaging(g, pi, eta0, opts);
    for (std::size_t i = 0; i < m; ++i) samples[i * replicas + r] = transport_norm(path[i].values(), pi, p);
  });
  std::vector<McEstimate> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    out.push_back(summarize(std::span<const double>(samples).subspan(i * replicas, replicas)));
  return out;
}

std::vector<double> w2_quadratic_form(const WeightedGraph& g, const SiteWeights& pi, double t, double tol) {
  const std::size_t n = g.num_vertices();
  std::vector<double> diag_density(n * n, 0.0);
  for (std::size_t z = 0; z < n; ++z) diag_density[z * n + z] = 1.0 / pi[z];
  return semigroup_apply(generator_bin_labeled(g, pi, 2, kTransientCap), diag_density, t, tol);
}

double w2_exact(std::span<const double> m, std::span<const double> eta) {
  const std::size_t n = eta.size();
  if (m.size() != n * n) throw std::invalid_argument("w2_exact: form has the wrong size");
  double s = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double row = 0.0;
    for (std::size_t y = 0; y < n; ++y) row += m[x * n + y] * eta[y];
    s += eta[x] * row;
  }
  return s - 1.0;
}

SupW2 sup_w2_exact(const WeightedGraph& g, const SiteWeights& pi, double t, double tol, std::size_t random_points,
                   std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  const auto m = w2_quadratic_form(g, pi, t, tol);
  SupW2 best;
  best.value = -std::numeric_limits<double>::infinity();
  auto consider = [&](std::vector<double> eta) {
    const double v = w2_exact(m, eta);
    if (v > best.value) {
      best.value = v;
      best.eta = std::move(eta);
    }
  };
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<double> eta(n, 0.0);
    eta[x] = 1.0;
    consider(std::move(eta));
  }
  CounterRng rng(seed, 0x5u);
  for (std::size_t i = 0; i < random_points; ++i) {
    const auto pt = random_simplex_point(n, rng);
    consider(std::vector<double>(pt.values().begin(), pt.values().end()));
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

NtDecomposition nt_decomposition(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> eta, double t,
                                 double tol) {
  const std::size_t n = g.num_vertices();
  const auto f = ratio_to_weights(eta, pi);
  const auto ff = square_tensor(f);
  const auto s2 = semigroup_apply(generator_bin_labeled(g, pi, 2, kTransientCap), ff, t, tol);
  const auto s11 = semigroup_apply(generator_product2(g, pi, kTransientCap), ff, t, tol);
  const auto h = semigroup_apply(generator_bin1(g, pi), f, t, tol);
  NtDecomposition out;
  double total = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    out.h_term += pi[z] * (h[z] - 1.0) * (h[z] - 1.0);
    out.nt_term += pi[z] * (s2[z * n + z] - s11[z * n + z]);
    total += pi[z] * s2[z * n + z];
  }
  out.exact_total = total - 1.0;
  return out;
}

double bin2_kernel_max_deviation(const WeightedGraph& g, const SiteWeights& pi, double t, double tol) {
  const std::size_t n = g.num_vertices();
  const auto q = generator_bin_labeled(g, pi, 2, kTransientCap);
  double worst = 0.0;
  std::vector<double> init(n * n, 0.0);
  for (std::size_t s = 0; s < n * n; ++s) {
    init[s] = 1.0;
    const auto p = transient_distribution(q, init, t, tol);
    init[s] = 0.0;
    for (std::size_t z = 0; z < n; ++z)
      for (std::size_t w = 0; w < n; ++w)
        worst = std::max(worst, std::abs(p[z * n + w] / (pi[z] * pi[w]) - 1.0));
  }
  return worst;
}

}  // namespace avgbin
