#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "avgbin/graphs.hpp"
#include "avgbin/rate_matrix.hpp"

namespace avgbin {

class NonReversibleError : public std::domain_error {
 public:
  NonReversibleError(const std::string& what, double residual) : std::domain_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct SpectralOptions {
  std::size_t dense_limit = 4096;
  double reversibility_tol = 1e-8;
  // Eigenvalues below zero_tol * max(1, lambda_max) count as zero.
  double zero_tol = 1e-9;
  // Eigenvalues within multiplicity_tol * max(1, gap) of the gap belong to
  // the gap eigenspace.
  double multiplicity_tol = 1e-8;
  // Iterative mode (dimension above dense_limit).
  std::size_t block = 6;
  double iterative_tol = 1e-10;
  std::size_t max_iterations = 400;
};

struct Spectrum {
  // Eigenvalues of -Q, ascending. Dense mode: all of them. Iterative mode:
  // 0 followed by the converged Ritz values of the lowest block.
  std::vector<double> eigenvalues;
  double gap = 0.0;
  double t_rel = 0.0;
  // Gap eigenfunction, unit norm in L^2(mu), chosen canonically (see
  // spectral_gap).
  std::vector<double> psi;
  // L^2(mu)-orthonormal basis of the gap eigenspace.
  std::vector<std::vector<double>> gap_eigenspace;
  // Dense mode only: column j is the L^2(mu)-normalized eigenfunction of
  // eigenvalues[j].
  Eigen::MatrixXd eigenfunctions;
  bool dense = true;
};

// Spectrum of a generator reversible w.r.t. mu, via the symmetrization
// D^{1/2} (-Q) D^{-1/2}, D = diag(mu). Dense self-adjoint solve up to
// dense_limit, block inverse iteration (CG solves, deflated against
// sqrt(mu)) above. Among the gap eigenspace basis, psi is the vector with the
// largest L^1(mu) norm, signed so that its first nonzero entry is positive.
Spectrum spectral_gap(const RateMatrix& q, std::span<const double> mu, const SpectralOptions& opts = {});

// Gap and relaxation time of the single-particle chain.
Spectrum spectrum_bin1(const WeightedGraph& g, const SiteWeights& pi);
double relaxation_time(const WeightedGraph& g, const SiteWeights& pi);

}  // namespace avgbin
