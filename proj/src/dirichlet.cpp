#include "avgbin/dirichlet.hpp"

#include <stdexcept>

namespace avgbin {

double dirichlet_form(const RateMatrix& q, std::span<const double> mu, std::span<const double> psi) {
  if (mu.size() != q.dim() || psi.size() != q.dim()) throw std::invalid_argument("dirichlet_form: dimension mismatch");
  const auto& a = q.offdiagonal();
  double total = 0.0;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const double diff = psi[i] - psi[a.col[p]];
      total += mu[i] * a.val[p] * diff * diff;
    }
  }
  return 0.5 * total;
}

double dirichlet_bin1(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> psi) {
  if (psi.size() != g.num_vertices() || pi.size() != g.num_vertices())
    throw std::invalid_argument("dirichlet_bin1: dimension mismatch");
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const double diff = psi[e.x] - psi[e.y];
    total += e.c * pi[e.x] * pi[e.y] / (pi[e.x] + pi[e.y]) * diff * diff;
  }
  return total;
}

double f_bin2_form(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> psi2) {
  const std::size_t n = g.num_vertices();
  if (psi2.size() != n * n || pi.size() != n) throw std::invalid_argument("f_bin2_form: dimension mismatch");
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const std::size_t x = e.x, y = e.y;
    const double w = pi[x] * pi[y] / (pi[x] + pi[y]);
    const double d = psi2[x * n + x] + psi2[y * n + y] - psi2[x * n + y] - psi2[y * n + x];
    total += e.c * w * w * d * d;
  }
  return total;
}

}  // namespace avgbin
