#include "avgbin/rate_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "avgbin/binomial.hpp"

namespace avgbin {

namespace {

using RowEntries = std::vector<std::pair<std::uint32_t, double>>;

// Sorted, merged CSR from per-row entry lists produced by fill(i, entries).
template <class Fill>
kernels::Csr assemble_rows(std::size_t dim, Fill&& fill) {
  kernels::Csr a;
  a.rows = dim;
  a.row_ptr.assign(dim + 1, 0);
  RowEntries row;
  for (std::size_t i = 0; i < dim; ++i) {
    row.clear();
    fill(i, row);
    std::sort(row.begin(), row.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    for (std::size_t p = 0; p < row.size();) {
      const std::uint32_t c = row[p].first;
      double v = 0.0;
      for (; p < row.size() && row[p].first == c; ++p) v += row[p].second;
      if (c == i || v == 0.0) continue;
      a.col.push_back(c);
      a.val.push_back(v);
    }
    a.row_ptr[i + 1] = a.val.size();
  }
  return a;
}

kernels::Csr transpose(const kernels::Csr& a) {
  kernels::Csr t;
  t.rows = a.rows;
  t.row_ptr.assign(a.rows + 1, 0);
  for (std::uint32_t c : a.col) ++t.row_ptr[c + 1];
  for (std::size_t i = 0; i < a.rows; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col.resize(a.nnz());
  t.val.resize(a.nnz());
  std::vector<std::size_t> fill(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const std::size_t q = fill[a.col[p]]++;
      t.col[q] = static_cast<std::uint32_t>(i);
      t.val[q] = a.val[p];
    }
  }
  return t;
}

void check_dim_fits(std::size_t dim) {
  if (dim > std::numeric_limits<std::uint32_t>::max())
    throw SizeLimitError("rate matrix dimension exceeds 32-bit column indices", dim, std::numeric_limits<std::uint32_t>::max());
}

void check_tuple_cap(std::size_t n, std::size_t k, std::size_t cap) {
  const std::uint64_t count = count_tuples(n, k);
  if (count > cap)
    throw SizeLimitError("labeled space V^" + std::to_string(k) + " with n=" + std::to_string(n) + " has " +
                             std::to_string(count) + " states, above the cap of " + std::to_string(cap),
                         count, cap);
}

}  // namespace

RateMatrix RateMatrix::from_offdiagonal(std::size_t dim, std::vector<Triplet> rates) {
  check_dim_fits(dim);
  for (const Triplet& t : rates) {
    if (t.row >= dim || t.col >= dim) throw std::invalid_argument("rate triplet out of range");
    if (!(t.rate >= 0.0) || !std::isfinite(t.rate)) throw std::invalid_argument("rates must be finite and nonnegative");
  }
  std::sort(rates.begin(), rates.end(), [](const Triplet& l, const Triplet& r) { return l.row < r.row; });
  std::size_t cursor = 0;
  return from_csr(assemble_rows(dim, [&](std::size_t i, RowEntries& row) {
    for (; cursor < rates.size() && rates[cursor].row == i; ++cursor)
      row.emplace_back(static_cast<std::uint32_t>(rates[cursor].col), rates[cursor].rate);
  }));
}

RateMatrix RateMatrix::from_csr(kernels::Csr forward) {
  RateMatrix q;
  const std::size_t dim = forward.rows;
  q.forward_ = std::move(forward);
  q.transpose_ = transpose(q.forward_);
  q.diag_.assign(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    double out = 0.0;
    for (std::size_t p = q.forward_.row_ptr[i]; p < q.forward_.row_ptr[i + 1]; ++p) out += q.forward_.val[p];
    q.diag_[i] = -out;
    q.max_exit_ = std::max(q.max_exit_, out);
  }
  return q;
}

RateMatrix RateMatrix::from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("generator must be square");
  std::vector<Triplet> rates;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) rates.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), m(i, j)});
  return from_offdiagonal(static_cast<std::size_t>(m.rows()), std::move(rates));
}

double RateMatrix::rate(std::size_t i, std::size_t j) const {
  if (i == j) return diag_.at(i);
  const auto begin = forward_.col.begin() + static_cast<std::ptrdiff_t>(forward_.row_ptr.at(i));
  const auto end = forward_.col.begin() + static_cast<std::ptrdiff_t>(forward_.row_ptr.at(i + 1));
  const auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(j));
  return (it != end && *it == j) ? forward_.val[static_cast<std::size_t>(it - forward_.col.begin())] : 0.0;
}

std::vector<double> RateMatrix::apply(std::span<const double> f) const {
  if (f.size() != dim()) throw std::invalid_argument("RateMatrix::apply: dimension mismatch");
  std::vector<double> out(dim());
  kernels::generator_apply(forward_, diag_, f, out);
  return out;
}

std::vector<double> RateMatrix::apply_left(std::span<const double> p) const {
  if (p.size() != dim()) throw std::invalid_argument("RateMatrix::apply_left: dimension mismatch");
  std::vector<double> out(dim());
  kernels::generator_apply(transpose_, diag_, p, out);
  return out;
}

double RateMatrix::max_row_sum_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    double s = diag_[i];
    for (std::size_t p = forward_.row_ptr[i]; p < forward_.row_ptr[i + 1]; ++p) s += forward_.val[p];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

Eigen::MatrixXd RateMatrix::to_dense() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < dim(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag_[i];
    for (std::size_t p = forward_.row_ptr[i]; p < forward_.row_ptr[i + 1]; ++p)
      m(static_cast<Eigen::Index>(i), forward_.col[p]) = forward_.val[p];
  }
  return m;
}

void RateMatrix::write_coordinate(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < dim(); ++i) {
    bool diag_written = false;
    for (std::size_t p = forward_.row_ptr[i]; p <= forward_.row_ptr[i + 1]; ++p) {
      const bool last = p == forward_.row_ptr[i + 1];
      if (!diag_written && (last || forward_.col[p] > i)) {
        out << i << ' ' << i << ' ' << diag_[i] << '\n';
        diag_written = true;
      }
      if (!last) out << i << ' ' << forward_.col[p] << ' ' << forward_.val[p] << '\n';
    }
  }
  out.precision(old_precision);
}

RateMatrix generator_bin_unlabeled(const WeightedGraph& g, const SiteWeights& pi, const UnlabeledSpace& space) {
  if (space.n() != g.num_vertices() || pi.size() != g.num_vertices())
    throw std::invalid_argument("generator_bin_unlabeled: graph, weights and space disagree on n");
  check_dim_fits(space.size());
  const std::size_t k = space.k();
  // pmf cache per edge and pile size m.
  std::vector<std::vector<std::vector<double>>> pmf(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const double p = pi[ed.x] / (pi[ed.x] + pi[ed.y]);
    for (std::uint32_t m = 0; m <= k; ++m) pmf[e].push_back(binomial_pmf(m, p));
  }
  ParticleConfig scratch(space.n());
  return RateMatrix::from_csr(assemble_rows(space.size(), [&](std::size_t i, RowEntries& row) {
    const auto xi = space.config(i);
    std::copy(xi.begin(), xi.end(), scratch.begin());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      const std::uint32_t m = xi[ed.x] + xi[ed.y];
      if (m == 0) continue;
      for (std::uint32_t j = 0; j <= m; ++j) {
        if (j == xi[ed.x]) continue;
        scratch[ed.x] = j;
        scratch[ed.y] = m - j;
        const double r = ed.c * pmf[e][m][j];
        if (r > 0.0) row.emplace_back(static_cast<std::uint32_t>(space.index_unchecked(scratch)), r);
      }
      scratch[ed.x] = xi[ed.x];
      scratch[ed.y] = xi[ed.y];
    }
  }));
}

RateMatrix generator_bin_labeled(const WeightedGraph& g, const SiteWeights& pi, std::size_t k, std::size_t cap) {
  const std::size_t n = g.num_vertices();
  if (pi.size() != n) throw std::invalid_argument("generator_bin_labeled: weights do not match graph");
  check_tuple_cap(n, k, cap);
  const auto dim = static_cast<std::size_t>(count_tuples(n, k));
  check_dim_fits(dim);
  std::vector<Triplet> rates;
  std::vector<Vertex> xs(k), ys(k);
  std::vector<std::size_t> movable;
  for (std::size_t i = 0; i < dim; ++i) {
    tuple_from_index(i, n, xs);
    for (const Edge& ed : g.edges()) {
      movable.clear();
      for (std::size_t a = 0; a < k; ++a)
        if (xs[a] == ed.x || xs[a] == ed.y) movable.push_back(a);
      if (movable.empty()) continue;
      const double p = pi[ed.x] / (pi[ed.x] + pi[ed.y]);
      const std::size_t m = movable.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        ys = xs;
        double w = ed.c;
        for (std::size_t b = 0; b < m; ++b) {
          const bool to_x = (mask >> b) & 1u;
          ys[movable[b]] = to_x ? ed.x : ed.y;
          w *= to_x ? p : 1.0 - p;
        }
        const std::size_t j = tuple_index(ys, n);
        if (j != i && w > 0.0) rates.push_back({i, j, w});
      }
    }
  }
  return RateMatrix::from_offdiagonal(dim, std::move(rates));
}

RateMatrix generator_product2(const WeightedGraph& g, const SiteWeights& pi, std::size_t cap) {
  const std::size_t n = g.num_vertices();
  check_tuple_cap(n, 2, cap);
  const RateMatrix q1 = generator_bin1(g, pi);
  const auto& a = q1.offdiagonal();
  std::vector<Triplet> rates;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t p = a.row_ptr[u]; p < a.row_ptr[u + 1]; ++p) rates.push_back({u * n + v, a.col[p] * n + v, a.val[p]});
      for (std::size_t p = a.row_ptr[v]; p < a.row_ptr[v + 1]; ++p) rates.push_back({u * n + v, u * n + a.col[p], a.val[p]});
    }
  return RateMatrix::from_offdiagonal(n * n, std::move(rates));
}

RateMatrix generator_bin1(const WeightedGraph& g, const SiteWeights& pi) {
  if (pi.size() != g.num_vertices()) throw std::invalid_argument("generator_bin1: weights do not match graph");
  std::vector<Triplet> rates;
  for (const Edge& e : g.edges()) {
    const double s = pi[e.x] + pi[e.y];
    rates.push_back({static_cast<std::size_t>(e.x), static_cast<std::size_t>(e.y), e.c * pi[e.y] / s});
    rates.push_back({static_cast<std::size_t>(e.y), static_cast<std::size_t>(e.x), e.c * pi[e.x] / s});
  }
  return RateMatrix::from_offdiagonal(g.num_vertices(), std::move(rates));
}

double detailed_balance_residual(const RateMatrix& q, std::span<const double> mu) {
  if (mu.size() != q.dim()) throw std::invalid_argument("detailed_balance_residual: dimension mismatch");
  const auto& a = q.offdiagonal();
  double worst = 0.0;
  for (std::size_t i = 0; i < q.dim(); ++i)
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
      worst = std::max(worst, std::abs(mu[i] * a.val[p] - mu[a.col[p]] * q.rate(a.col[p], i)));
  return worst;
}

}  // namespace avgbin
