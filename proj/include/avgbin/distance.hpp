#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "avgbin/averaging.hpp"
#include "avgbin/graphs.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/state_space.hpp"

namespace avgbin {

// 1/2 sum |p - q|. Both vectors must sum to 1 within 1e-8.
double tv_distance(std::span<const double> p, std::span<const double> q);

struct HeatKernel {
  Vertex x = 0;
  double t = 0.0;
  // h_t^x(y) = p_t(x, y) / pi(y)
  std::vector<double> h;
};

HeatKernel heat_kernel(const WeightedGraph& g, const SiteWeights& pi, Vertex x, double t, double tol = 1e-12);
// h_t^eta = S_t^{Bin(1)} (eta / pi)
std::vector<double> h_eta(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> eta, double t,
                          double tol = 1e-12);

// Chi-square divergence of mu_{k,eta} from mu_{k,pi}: (1 + |eta/pi - 1|_2^2)^k - 1,
// evaluated as expm1(k log1p(.)); returns +inf on overflow.
double chi2_multinomial(std::span<const double> eta, const SiteWeights& pi, std::size_t k);
// min(1, sqrt(chi2))
double tv_bound_multinomial(std::span<const double> eta, const SiteWeights& pi, std::size_t k);
// TV(mu_{k,eta}, mu_{k,pi}) by enumeration of Omega_k.
double tv_multinomial_exact(std::span<const double> eta, const SiteWeights& pi, std::size_t k,
                            std::size_t cap = kEnumerationCap);
// Chi-square divergence by enumeration; the oracle for chi2_multinomial.
double chi2_multinomial_enumerated(std::span<const double> eta, const SiteWeights& pi, std::size_t k,
                                   std::size_t cap = kEnumerationCap);

// Unlabeled Bin(k) chain ready for transient computations.
struct BinModel {
  UnlabeledSpace space;
  RateMatrix q;
  std::vector<double> mu;
};
// Throws SizeLimitError when |Omega_k| exceeds cap; the bound-based profile
// (tv_upper_bound_bin with wilson_report) is the fallback.
BinModel make_bin_model(const WeightedGraph& g, const SiteWeights& pi, std::size_t k,
                        std::size_t cap = kTransientCap);

struct ProfilePoint {
  double t;
  double value;
};

// TV(delta_{xi0} e^{tQ}, mu_{k,pi}) on increasing times.
std::vector<ProfilePoint> tv_profile_exact(const BinModel& model, const ParticleConfig& xi0,
                                           std::span<const double> times, double tol = 1e-10);
std::vector<ProfilePoint> tv_profile_exact(const WeightedGraph& g, const SiteWeights& pi, std::size_t k,
                                           const ParticleConfig& xi0, std::span<const double> times,
                                           double tol = 1e-10);

struct WorstPileProfile {
  std::vector<ProfilePoint> profile;  // pointwise max over the tried starts
  std::vector<Vertex> argmax;         // pile vertex attaining it, per time
  std::vector<Vertex> tried;
};
// All k particles piled on one vertex. Every vertex is tried when
// n <= max_starts; otherwise max_starts vertices evenly spaced in index.
WorstPileProfile tv_profile_worst_pile(const BinModel& model, std::span<const double> times, double tol = 1e-10,
                                       std::size_t max_starts = 16);

// min(1, sqrt(e k w2_sq))
double tv_upper_bound_bin(std::size_t k, double w2_sq);

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

// Mean and standard error of sample values, reduced in index order.
McEstimate summarize(std::span<const double> values);

// Monte Carlo E|eta_t/pi - 1|_p over independent Averaging replicas
// (replica r uses stream r of seed). threads <= 0 uses the OpenMP default.
McEstimate wasserstein_estimate(const WeightedGraph& g, const SiteWeights& pi, const SimplexPoint& eta0, double t,
                                double p, std::size_t replicas, std::uint64_t seed, int threads = 0);
// Same along increasing times, one trajectory per replica.
std::vector<McEstimate> wasserstein_profile(const WeightedGraph& g, const SiteWeights& pi, const SimplexPoint& eta0,
                                            std::span<const double> times, double p, std::size_t replicas,
                                            std::uint64_t seed, int threads = 0);

// M(x, y) = sum_z p_t((x,y), (z,z)) / pi(z) for the labeled Bin(2) chain, so
// that E_eta|eta_t/pi - 1|_2^2 = eta^T M eta - 1. Row-major n x n.
std::vector<double> w2_quadratic_form(const WeightedGraph& g, const SiteWeights& pi, double t, double tol = 1e-12);
// Exact E_eta|eta_t/pi - 1|_2^2 from the form above.
double w2_exact(std::span<const double> m, std::span<const double> eta);

struct SupW2 {
  double value = 0.0;
  std::vector<double> eta;  // maximizer among the candidates
};
// Maximum of the exact E_eta|eta_t/pi - 1|_2^2 over Dirac starts and
// `random_points` uniform simplex points.
SupW2 sup_w2_exact(const WeightedGraph& g, const SiteWeights& pi, double t, double tol = 1e-12,
                   std::size_t random_points = 100, std::uint64_t seed = 0);

struct NtDecomposition {
  double h_term = 0.0;       // |h_t^eta - 1|_2^2 via the Bin(1) semigroup
  double nt_term = 0.0;      // sum_z pi(z) (S^{Bin(2)} - S^{Bin(1)(x)Bin(1)})(f (x) f)(z, z)
  double exact_total = 0.0;  // sum_z pi(z) S^{Bin(2)}(f (x) f)(z, z) - 1, f = eta/pi
};
NtDecomposition nt_decomposition(const WeightedGraph& g, const SiteWeights& pi, std::span<const double> eta, double t,
                                 double tol = 1e-12);

// max over (x,y), (z,w) of |p_t((x,y),(z,w)) / (pi(z) pi(w)) - 1| for the
// labeled Bin(2) chain.
double bin2_kernel_max_deviation(const WeightedGraph& g, const SiteWeights& pi, double t, double tol = 1e-12);

}  // namespace avgbin
