#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "avgbin/graphs.hpp"
#include "avgbin/kernels.hpp"
#include "avgbin/state_space.hpp"

namespace avgbin {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double rate;
};

// Generator Q of a finite continuous-time chain: nonnegative off-diagonal
// rates in CSR (plus the transpose for measure actions) and the diagonal
// -sum of each row.
class RateMatrix {
 public:
  RateMatrix() = default;
  // Off-diagonal rates; duplicates are summed, entries with row == col or
  // zero rate are dropped.
  static RateMatrix from_offdiagonal(std::size_t dim, std::vector<Triplet> rates);
  // Dense generator; the diagonal is recomputed from the off-diagonal part.
  static RateMatrix from_dense(const Eigen::MatrixXd& q);

  std::size_t dim() const { return forward_.rows; }
  std::size_t nnz() const { return forward_.nnz(); }
  double diagonal(std::size_t i) const { return diag_[i]; }
  std::span<const double> diagonal() const { return diag_; }
  double exit_rate(std::size_t i) const { return -diag_[i]; }
  double max_exit_rate() const { return max_exit_; }
  const kernels::Csr& offdiagonal() const { return forward_; }
  const kernels::Csr& offdiagonal_transpose() const { return transpose_; }
  double rate(std::size_t i, std::size_t j) const;

  // (Q f)(i) = sum_j Q(i,j) f(j): action on functions.
  std::vector<double> apply(std::span<const double> f) const;
  // (p Q)(j) = sum_i p(i) Q(i,j): action on measures.
  std::vector<double> apply_left(std::span<const double> p) const;

  // Largest |row sum| (diagonal included); zero up to rounding.
  double max_row_sum_residual() const;
  Eigen::MatrixXd to_dense() const;
  // "row col rate" lines, diagonal included, rows ascending.
  void write_coordinate(std::ostream& out) const;

 private:
  friend RateMatrix generator_bin_unlabeled(const WeightedGraph&, const SiteWeights&, const UnlabeledSpace&);
  // Off-diagonal rows as assembled; the diagonal and transpose follow.
  static RateMatrix from_csr(kernels::Csr forward);

  kernels::Csr forward_, transpose_;
  std::vector<double> diag_;
  double max_exit_ = 0.0;
};

// Binomial Splitting on Omega_k: an event on edge xy redraws xi(x) ~
// Binomial(m, pi(x)/(pi(x)+pi(y))) with m = xi(x)+xi(y). The share that
// reproduces the current state is left on the diagonal.
RateMatrix generator_bin_unlabeled(const WeightedGraph& g, const SiteWeights& pi, const UnlabeledSpace& space);
// Labeled chain on V^k (tuple order): each particle on {x, y} independently
// moves to x with probability pi(x)/(pi(x)+pi(y)).
RateMatrix generator_bin_labeled(const WeightedGraph& g, const SiteWeights& pi, std::size_t k,
                                 std::size_t cap = kEnumerationCap);
// Two independent single-particle chains on V^2 (Kronecker sum).
RateMatrix generator_product2(const WeightedGraph& g, const SiteWeights& pi, std::size_t cap = kEnumerationCap);
RateMatrix generator_bin1(const WeightedGraph& g, const SiteWeights& pi);

// max |mu_i Q_ij - mu_j Q_ji|.
double detailed_balance_residual(const RateMatrix& q, std::span<const double> mu);

}  // namespace avgbin
