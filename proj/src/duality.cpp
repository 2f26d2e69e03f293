#include "avgbin/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "avgbin/binomial.hpp"
#include "avgbin/rng.hpp"
#include "avgbin/uniformization.hpp"

namespace avgbin {

TensorFunction::TensorFunction(std::size_t n, std::size_t k) : n_(n), k_(k) {
  const std::uint64_t size = count_tuples(n, k);
  if (size > kEnumerationCap) throw SizeLimitError("tensor function on V^k too large", size, kEnumerationCap);
  values_.assign(static_cast<std::size_t>(size), 0.0);
}

TensorFunction::TensorFunction(std::size_t n, std::size_t k, std::vector<double> values)
    : n_(n), k_(k), values_(std::move(values)) {
  if (values_.size() != count_tuples(n, k))
    throw std::invalid_argument("tensor function needs n^k = " + std::to_string(count_tuples(n, k)) + " values");
}

double moment_duality(std::span<const Vertex> xs, std::span<const double> eta, const SiteWeights& pi) {
  double d = 1.0;
  for (Vertex x : xs) d *= eta[static_cast<std::size_t>(x)] / pi[static_cast<std::size_t>(x)];
  return d;
}

double orthogonal_duality(std::span<const Vertex> xs, std::span<const double> eta, const SiteWeights& pi) {
  double d = 1.0;
  for (Vertex x : xs) d *= eta[static_cast<std::size_t>(x)] / pi[static_cast<std::size_t>(x)] - 1.0;
  return d;
}

TensorFunction duality_tensor(std::span<const double> eta, const SiteWeights& pi, std::size_t k, bool orthogonal) {
  const std::size_t n = pi.size();
  if (eta.size() != n) throw std::invalid_argument("duality_tensor: dimension mismatch");
  std::vector<double> factor(n);
  for (std::size_t x = 0; x < n; ++x) factor[x] = eta[x] / pi[x] - (orthogonal ? 1.0 : 0.0);
  std::vector<double> values{1.0};
  for (std::size_t level = 0; level < k; ++level) {
    std::vector<double> next(values.size() * n);
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t x = 0; x < n; ++x) next[i * n + x] = values[i] * factor[x];
    values = std::move(next);
  }
  return TensorFunction(n, k, std::move(values));
}

double duality_generator_residual(const WeightedGraph& g, const SiteWeights& pi, std::span<const Vertex> xs,
                                  const SimplexPoint& eta, bool orthogonal, const EdgeUpdateFn& update) {
  auto dual = [&](std::span<const Vertex> ys, std::span<const double> e) {
    return orthogonal ? orthogonal_duality(ys, e, pi) : moment_duality(ys, e, pi);
  };
  const std::vector<Vertex> base(xs.begin(), xs.end());
  const SimplexFunction f = [&](const SimplexPoint& e) { return dual(base, e.values()); };
  const double avg_side = avg_generator_apply(f, eta, g, pi, update);

  // Labeled generator: on edge xy, every particle of {x, y} independently
  // lands on x with probability p; sum over all landing patterns.
  double bin_side = 0.0;
  std::vector<Vertex> ys(base);
  std::vector<std::size_t> on_edge;
  const double d0 = dual(base, eta.values());
  for (const Edge& e : g.edges()) {
    on_edge.clear();
    for (std::size_t i = 0; i < base.size(); ++i)
      if (base[i] == e.x || base[i] == e.y) on_edge.push_back(i);
    if (on_edge.empty()) continue;
    const double p = pi[e.x] / (pi[e.x] + pi[e.y]);
    double expect = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << on_edge.size()); ++mask) {
      double w = 1.0;
      for (std::size_t j = 0; j < on_edge.size(); ++j) {
        const bool to_x = (mask >> j) & 1u;
        ys[on_edge[j]] = to_x ? e.x : e.y;
        w *= to_x ? p : 1.0 - p;
      }
      expect += w * dual(ys, eta.values());
    }
    for (std::size_t i : on_edge) ys[i] = base[i];
    bin_side += e.c * (expect - d0);
  }
  return std::abs(avg_side - bin_side);
}

std::int64_t falling_factorial(std::span<const std::uint32_t> xi, std::span<const Vertex> xs) {
  std::int64_t result = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto x = static_cast<std::size_t>(xs[i]);
    if (x >= xi.size()) throw std::invalid_argument("falling_factorial: vertex out of range");
    std::int64_t factor = xi[x];
    for (std::size_t j = 0; j < i; ++j) factor -= xs[j] == xs[i];
    if (factor <= 0) return 0;
    result *= factor;
  }
  return result;
}

double lambda_apply(std::span<const double> f, const UnlabeledSpace& space, std::span<const double> eta) {
  if (f.size() != space.size() || eta.size() != space.n())
    throw std::invalid_argument("lambda_apply: dimension mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (f[i] != 0.0) total += multinomial_pmf(eta, space.config(i)) * f[i];
  return total;
}

double p_bin_edge_apply(std::span<const double> f, const UnlabeledSpace& space, std::span<const std::uint32_t> xi,
                        Vertex x, Vertex y, const SiteWeights& pi) {
  if (f.size() != space.size()) throw std::invalid_argument("p_bin_edge_apply: dimension mismatch");
  const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
  const std::uint32_t m = xi[ux] + xi[uy];
  const auto pmf = binomial_pmf(m, pi[ux] / (pi[ux] + pi[uy]));
  ParticleConfig moved(xi.begin(), xi.end());
  double total = 0.0;
  for (std::uint32_t j = 0; j <= m; ++j) {
    moved[ux] = j;
    moved[uy] = m - j;
    total += pmf[j] * f[space.index_unchecked(moved)];
  }
  return total;
}

double intertwining_residual(const WeightedGraph& g, const SiteWeights& pi, const UnlabeledSpace& space,
                             std::span<const double> f, const SimplexPoint& eta, const EdgeUpdateFn& update) {
  double worst = 0.0;
  std::vector<double> pf(space.size());
  for (const Edge& e : g.edges()) {
    const double lhs = lambda_apply(f, space, update(eta, e.x, e.y, pi).values());
    for (std::size_t i = 0; i < space.size(); ++i) pf[i] = p_bin_edge_apply(f, space, space.config(i), e.x, e.y, pi);
    worst = std::max(worst, std::abs(lhs - lambda_apply(pf, space, eta.values())));
  }
  return worst;
}

TensorFunction annihilate(const TensorFunction& psi, std::size_t i) {
  const std::size_t n = psi.n(), k = psi.k() + 1;
  if (i >= k) throw std::out_of_range("annihilate: slot " + std::to_string(i) + " out of range for k=" + std::to_string(k));
  TensorFunction out(n, k);
  std::vector<Vertex> xs(k), rest(k - 1);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    tuple_from_index(idx, n, xs);
    std::copy(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(i), rest.begin());
    std::copy(xs.begin() + static_cast<std::ptrdiff_t>(i) + 1, xs.end(), rest.begin() + static_cast<std::ptrdiff_t>(i));
    out[idx] = psi[tuple_index(rest, n)];
  }
  return out;
}

TensorFunction create(const TensorFunction& phi, std::size_t i, const SiteWeights& pi) {
  const std::size_t n = phi.n(), k = phi.k();
  if (k == 0 || i >= k)
    throw std::out_of_range("create: slot " + std::to_string(i) + " out of range for k=" + std::to_string(k));
  if (pi.size() != n) throw std::invalid_argument("create: weights do not match");
  TensorFunction out(n, k - 1);
  std::vector<Vertex> xs(k), rest(k - 1);
  for (std::size_t idx = 0; idx < phi.size(); ++idx) {
    tuple_from_index(idx, n, xs);
    std::copy(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(i), rest.begin());
    std::copy(xs.begin() + static_cast<std::ptrdiff_t>(i) + 1, xs.end(), rest.begin() + static_cast<std::ptrdiff_t>(i));
    out[tuple_index(rest, n)] += pi[static_cast<std::size_t>(xs[i])] * phi[idx];
  }
  return out;
}

double inner_product(const TensorFunction& psi, const TensorFunction& phi, const SiteWeights& pi) {
  if (psi.n() != phi.n() || psi.k() != phi.k() || pi.size() != psi.n())
    throw std::invalid_argument("inner_product: shapes differ");
  const auto mu = product_measure(pi.values(), psi.k());
  double total = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) total += mu[i] * psi[i] * phi[i];
  return total;
}

SymResult sym_project(const TensorFunction& psi, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = psi.n(), k = psi.k();
  std::vector<std::size_t> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 0);
  TensorFunction out(n, k);
  std::vector<Vertex> xs(k), permuted(k);
  auto accumulate_permutation = [&] {
    for (std::size_t idx = 0; idx < psi.size(); ++idx) {
      tuple_from_index(idx, n, xs);
      for (std::size_t a = 0; a < k; ++a) permuted[a] = xs[sigma[a]];
      out[idx] += psi[tuple_index(permuted, n)];
    }
  };
  const bool exact = k <= 6;
  std::size_t count = 0;
  if (exact) {
    do {
      accumulate_permutation();
      ++count;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  } else {
    CounterRng rng(seed, 0x5e7);
    for (; count < samples; ++count) {
      std::iota(sigma.begin(), sigma.end(), 0);
      for (std::size_t a = k; a-- > 1;) std::swap(sigma[a], sigma[rng() % (a + 1)]);
      accumulate_permutation();
    }
  }
  for (double& v : out.values()) v /= static_cast<double>(count);
  return {std::move(out), exact};
}

std::vector<double> jk_apply(std::span<const double> f, const UnlabeledSpace& from, const UnlabeledSpace& to) {
  if (to.k() < 2 || from.k() + 1 != to.k() || from.n() != to.n())
    throw std::invalid_argument("jk_apply: need spaces Omega_{k-1} and Omega_k with k >= 2");
  if (f.size() != from.size()) throw std::invalid_argument("jk_apply: f does not match Omega_{k-1}");
  std::vector<double> out(to.size(), 0.0);
  ParticleConfig removed(to.n());
  for (std::size_t i = 0; i < to.size(); ++i) {
    const auto xi = to.config(i);
    std::copy(xi.begin(), xi.end(), removed.begin());
    for (std::size_t x = 0; x < to.n(); ++x) {
      if (xi[x] == 0) continue;
      --removed[x];
      out[i] += xi[x] * f[from.index_unchecked(removed)];
      ++removed[x];
    }
  }
  return out;
}

Eigen::MatrixXd jk_matrix(const UnlabeledSpace& from, const UnlabeledSpace& to) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
  std::vector<double> unit(from.size(), 0.0);
  for (std::size_t c = 0; c < from.size(); ++c) {
    unit[c] = 1.0;
    const auto col = jk_apply(unit, from, to);
    for (std::size_t r = 0; r < to.size(); ++r) j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
    unit[c] = 0.0;
  }
  return j;
}

double f_psi_eval(const TensorFunction& psi, std::span<const double> eta, const SiteWeights& pi) {
  const TensorFunction dbar = duality_tensor(eta, pi, psi.k(), true);
  return inner_product(psi, dbar, pi);
}

double selfduality_residual(const WeightedGraph& g, const SiteWeights& pi, std::size_t k, std::size_t l, double t,
                            double tol) {
  if (l < k) throw std::invalid_argument("selfduality_residual: need l >= k");
  const std::size_t n = g.num_vertices();
  const UnlabeledSpace omega_l(n, l);
  const RateMatrix q_l = generator_bin_unlabeled(g, pi, omega_l);
  const RateMatrix q_k = generator_bin_labeled(g, pi, k);
  const std::size_t tuples = q_k.dim();
  const auto pi_k = product_measure(pi.values(), k);

  // table[x][xi] = [xi]_x / pi(x)
  std::vector<std::vector<double>> table(tuples, std::vector<double>(omega_l.size()));
  std::vector<Vertex> xs(k);
  for (std::size_t a = 0; a < tuples; ++a) {
    tuple_from_index(a, n, xs);
    for (std::size_t i = 0; i < omega_l.size(); ++i)
      table[a][i] = static_cast<double>(falling_factorial(omega_l.config(i), xs)) / pi_k[a];
  }
  std::vector<std::vector<double>> lhs(tuples);
  for (std::size_t a = 0; a < tuples; ++a) lhs[a] = semigroup_apply(q_l, table[a], t, tol);
  double worst = 0.0;
  std::vector<double> column(tuples);
  for (std::size_t i = 0; i < omega_l.size(); ++i) {
    for (std::size_t a = 0; a < tuples; ++a) column[a] = table[a][i];
    const auto rhs = semigroup_apply(q_k, column, t, tol);
    for (std::size_t a = 0; a < tuples; ++a) worst = std::max(worst, std::abs(lhs[a][i] - rhs[a]));
  }
  return worst;
}

double multicolor_intertwining_residual(const WeightedGraph& g, const SiteWeights& pi,
                                        std::span<const std::uint32_t> xi,
                                        std::span<const std::vector<double>> color_f,
                                        std::span<const SimplexPoint> color_eta, std::size_t edge_id) {
  const std::size_t n = g.num_vertices();
  if (xi.size() != n || color_f.size() != n || color_eta.size() != n)
    throw std::invalid_argument("multicolor_intertwining_residual: one entry per color (vertex) required");
  const Edge& e = g.edge(edge_id);
  // Per color: Lambda f_z (eta^{xy}), Lambda f_z (eta), Lambda (P f_z)(eta).
  double lit_lhs = 1.0, lit_rhs = 1.0, moved = 1.0, base = 1.0, stepped = 1.0;
  for (std::size_t z = 0; z < n; ++z) {
    if (xi[z] == 0) continue;
    const UnlabeledSpace space(n, xi[z]);
    const auto& f = color_f[z];
    std::vector<double> pf(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) pf[i] = p_bin_edge_apply(f, space, space.config(i), e.x, e.y, pi);
    const double a = lambda_apply(f, space, edge_update(color_eta[z], e.x, e.y, pi).values());
    const double b = lambda_apply(f, space, color_eta[z].values());
    const double c = lambda_apply(pf, space, color_eta[z].values());
    lit_lhs *= a - b;
    lit_rhs *= c - b;
    moved *= a;
    stepped *= c;
    base *= b;
  }
  const double literal = std::abs(lit_lhs - lit_rhs);
  const double coupled = std::abs((moved - base) - (stepped - base));
  return std::max(literal, coupled);
}

}  // namespace avgbin
