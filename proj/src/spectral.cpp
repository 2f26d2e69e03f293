#include "avgbin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "avgbin/rng.hpp"

namespace avgbin {

namespace {

void check_reversible(const RateMatrix& q, std::span<const double> mu, double tol) {
  if (mu.size() != q.dim()) throw std::invalid_argument("spectral_gap: mu does not match the generator");
  for (double m : mu)
    if (!(m > 0.0)) throw std::invalid_argument("spectral_gap: stationary vector must be strictly positive");
  const double residual = detailed_balance_residual(q, mu);
  if (residual > tol) {
    std::ostringstream msg;
    msg << "generator is not reversible w.r.t. the given measure (max detailed-balance residual " << residual << ")";
    throw NonReversibleError(msg.str(), residual);
  }
}

double l1_norm(std::span<const double> f, std::span<const double> mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += mu[i] * std::abs(f[i]);
  return s;
}

void canonical_sign(std::vector<double>& f) {
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  for (double v : f) {
    if (std::abs(v) > 1e-12 * scale) {
      if (v < 0.0)
        for (double& w : f) w = -w;
      return;
    }
  }
}

void choose_psi(Spectrum& s, std::span<const double> mu) {
  std::size_t best = 0;
  double best_l1 = -1.0;
  for (std::size_t j = 0; j < s.gap_eigenspace.size(); ++j) {
    canonical_sign(s.gap_eigenspace[j]);
    const double l1 = l1_norm(s.gap_eigenspace[j], mu);
    // Strict comparison keeps the first of numerically tied candidates.
    if (l1 > best_l1 * (1.0 + 1e-12)) {
      best = j;
      best_l1 = l1;
    }
  }
  s.psi = s.gap_eigenspace.at(best);
}

Spectrum dense_spectrum(const RateMatrix& q, std::span<const double> mu, const SpectralOptions& opts) {
  const auto d = static_cast<Eigen::Index>(q.dim());
  Eigen::VectorXd sq(d), isq(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    sq(i) = std::sqrt(mu[static_cast<std::size_t>(i)]);
    isq(i) = 1.0 / sq(i);
  }
  Eigen::MatrixXd s = -(sq.asDiagonal() * q.to_dense() * isq.asDiagonal());
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");

  Spectrum out;
  out.dense = true;
  const Eigen::VectorXd& lam = solver.eigenvalues();
  out.eigenvalues.assign(lam.data(), lam.data() + d);
  out.eigenfunctions = isq.asDiagonal() * solver.eigenvectors();
  const double scale = std::max(1.0, lam(d - 1));
  Eigen::Index first = 0;
  while (first < d && lam(first) <= opts.zero_tol * scale) ++first;
  if (first == d) throw std::domain_error("generator has no positive eigenvalue (single state or no edges)");
  out.gap = lam(first);
  out.t_rel = 1.0 / out.gap;
  const double band = opts.multiplicity_tol * std::max(1.0, out.gap);
  for (Eigen::Index j = first; j < d && lam(j) - out.gap <= band; ++j) {
    const Eigen::VectorXd f = out.eigenfunctions.col(j);
    out.gap_eigenspace.emplace_back(f.data(), f.data() + d);
  }
  choose_psi(out, mu);
  return out;
}

Spectrum iterative_spectrum(const RateMatrix& q, std::span<const double> mu, const SpectralOptions& opts) {
  const auto d = static_cast<Eigen::Index>(q.dim());
  const auto b = static_cast<Eigen::Index>(std::min<std::size_t>(opts.block, q.dim() - 1));
  Eigen::VectorXd sq(d);
  for (Eigen::Index i = 0; i < d; ++i) sq(i) = std::sqrt(mu[static_cast<std::size_t>(i)]);

  std::vector<Eigen::Triplet<double>> entries;
  const auto& a = q.offdiagonal();
  for (std::size_t i = 0; i < q.dim(); ++i) {
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i), -q.diagonal(i));
    for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const std::size_t j = a.col[p];
      entries.emplace_back(static_cast<int>(i), static_cast<int>(j), -0.5 * a.val[p] * sq(i) / sq(j));
      entries.emplace_back(static_cast<int>(j), static_cast<int>(i), -0.5 * a.val[p] * sq(i) / sq(j));
    }
  }
  Eigen::SparseMatrix<double> s(d, d);
  s.setFromTriplets(entries.begin(), entries.end());
  const Eigen::VectorXd v0 = sq.normalized();

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-13);
  cg.setMaxIterations(static_cast<Eigen::Index>(20 * std::sqrt(static_cast<double>(d))) + 1000);
  cg.compute(s);

  CounterRng rng(0x5eed, 0);
  Eigen::MatrixXd x(d, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index i = 0; i < d; ++i) x(i, j) = rng.uniform() - 0.5;
  auto deflate_orthonormalize = [&](Eigen::MatrixXd& m) {
    m -= v0 * (v0.transpose() * m);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    m = qr.householderQ() * Eigen::MatrixXd::Identity(d, b);
  };
  deflate_orthonormalize(x);

  Eigen::VectorXd theta;
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    Eigen::MatrixXd y(d, b);
    for (Eigen::Index j = 0; j < b; ++j) y.col(j) = cg.solve(x.col(j));
    deflate_orthonormalize(y);
    const Eigen::MatrixXd sy = s * y;
    Eigen::MatrixXd h = y.transpose() * sy;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(h);
    x = y * ritz.eigenvectors();
    theta = ritz.eigenvalues();
    const Eigen::MatrixXd r = sy * ritz.eigenvectors() - x * theta.asDiagonal();
    double worst = 0.0;
    for (Eigen::Index j = 0; j + 1 < b || (b == 1 && j == 0); ++j) worst = std::max(worst, r.col(j).norm());
    if (worst <= opts.iterative_tol * std::max(1.0, theta(b - 1))) {
      Spectrum out;
      out.dense = false;
      out.eigenvalues.push_back(0.0);
      for (Eigen::Index j = 0; j + 1 < b || (b == 1 && j == 0); ++j) out.eigenvalues.push_back(theta(j));
      out.gap = theta(0);
      out.t_rel = 1.0 / out.gap;
      const double band = opts.multiplicity_tol * std::max(1.0, out.gap);
      for (Eigen::Index j = 0; j < b && theta(j) - out.gap <= band; ++j) {
        std::vector<double> f(static_cast<std::size_t>(d));
        for (Eigen::Index i = 0; i < d; ++i) f[static_cast<std::size_t>(i)] = x(i, j) / sq(i);
        out.gap_eigenspace.push_back(std::move(f));
      }
      choose_psi(out, mu);
      return out;
    }
  }
  throw std::runtime_error("inverse iteration did not converge within " + std::to_string(opts.max_iterations) +
                           " sweeps");
}

}  // namespace

Spectrum spectral_gap(const RateMatrix& q, std::span<const double> mu, const SpectralOptions& opts) {
  check_reversible(q, mu, opts.reversibility_tol);
  if (q.dim() < 2) throw std::domain_error("spectral gap needs at least two states");
  if (q.dim() <= opts.dense_limit) return dense_spectrum(q, mu, opts);
  return iterative_spectrum(q, mu, opts);
}

Spectrum spectrum_bin1(const WeightedGraph& g, const SiteWeights& pi) {
  return spectral_gap(generator_bin1(g, pi), pi.values());
}

double relaxation_time(const WeightedGraph& g, const SiteWeights& pi) { return spectrum_bin1(g, pi).t_rel; }

}  // namespace avgbin
