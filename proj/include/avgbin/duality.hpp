#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "avgbin/averaging.hpp"
#include "avgbin/graphs.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/state_space.hpp"

namespace avgbin {

// Function on V^k stored in tuple order (see tuple_index).
class TensorFunction {
 public:
  TensorFunction(std::size_t n, std::size_t k);
  TensorFunction(std::size_t n, std::size_t k, std::vector<double> values);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(std::span<const Vertex> xs) const { return values_.at(tuple_index(xs, n_)); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  std::size_t n_, k_;
  std::vector<double> values_;
};

// prod_i eta(x_i) / pi(x_i)
double moment_duality(std::span<const Vertex> xs, std::span<const double> eta, const SiteWeights& pi);
// prod_i (eta(x_i) / pi(x_i) - 1)
double orthogonal_duality(std::span<const Vertex> xs, std::span<const double> eta, const SiteWeights& pi);
// x -> D(x, eta) (or the orthogonal version) as a function on V^k.
TensorFunction duality_tensor(std::span<const double> eta, const SiteWeights& pi, std::size_t k, bool orthogonal);

// Generator-level duality for one labeled tuple xs:
//   |L^Avg D(xs, .)(eta) - (L^{Bin(k)} D(., eta))(xs)|
// with D the moment (or orthogonal) duality function and L^{Bin(k)} the
// labeled generator, applied directly from its edge-wise definition.
double duality_generator_residual(const WeightedGraph& g, const SiteWeights& pi, std::span<const Vertex> xs,
                                  const SimplexPoint& eta, bool orthogonal, const EdgeUpdateFn& update = edge_update);

// [xi]_x = xi(x_1) (xi(x_2) - 1{x_2 = x_1}) (xi(x_3) - 1{x_3 = x_1} - 1{x_3 = x_2}) ...
std::int64_t falling_factorial(std::span<const std::uint32_t> xi, std::span<const Vertex> xs);

// sum_xi mu_{k,eta}(xi) f(xi); eta may have zero entries.
double lambda_apply(std::span<const double> f, const UnlabeledSpace& space, std::span<const double> eta);

// Expectation of f after the Binomial redistribution of xi on edge xy.
double p_bin_edge_apply(std::span<const double> f, const UnlabeledSpace& space, std::span<const std::uint32_t> xi,
                        Vertex x, Vertex y, const SiteWeights& pi);

// max over edges of |Lambda_k f(eta^{xy}) - Lambda_k (P_xy f)(eta)|. The
// Averaging update is injectable so that a broken update can be detected.
double intertwining_residual(const WeightedGraph& g, const SiteWeights& pi, const UnlabeledSpace& space,
                             std::span<const double> f, const SimplexPoint& eta,
                             const EdgeUpdateFn& update = edge_update);

// Inserts a dummy coordinate at slot i (0-based, i <= psi.k()): the result on
// V^{k+1} does not depend on x_i.
TensorFunction annihilate(const TensorFunction& psi, std::size_t i);
// Integrates coordinate i (0-based, i < phi.k()) against pi.
TensorFunction create(const TensorFunction& phi, std::size_t i, const SiteWeights& pi);
// <psi, phi> in L^2(pi^{(x)k}).
double inner_product(const TensorFunction& psi, const TensorFunction& phi, const SiteWeights& pi);

struct SymResult {
  TensorFunction value;
  bool exact;
};
// Average over coordinate permutations: all k! for k <= 6, otherwise
// `samples` random permutations and exact = false.
SymResult sym_project(const TensorFunction& psi, std::size_t samples = 5040, std::uint64_t seed = 0);

// (J_k f)(xi) = sum_x xi(x) f(xi - delta_x), from functions on Omega_{k-1}
// (space `from`) to functions on Omega_k (space `to`).
std::vector<double> jk_apply(std::span<const double> f, const UnlabeledSpace& from, const UnlabeledSpace& to);
Eigen::MatrixXd jk_matrix(const UnlabeledSpace& from, const UnlabeledSpace& to);

// f_psi(eta) = sum_x pi(x) psi(x) Dbar(x, eta).
double f_psi_eval(const TensorFunction& psi, std::span<const double> eta, const SiteWeights& pi);

// max over (x in V^k, xi in Omega_l) of
//   |E_xi[[xi_t]_x / pi(x)] - (S_t^{Bin(k), labeled} [xi]_. / pi(.))(x)|
// with both semigroups evaluated by uniformization at tolerance tol.
double selfduality_residual(const WeightedGraph& g, const SiteWeights& pi, std::size_t k, std::size_t l, double t,
                            double tol);

// Per-edge intertwining for the multicolored processes, tested on product
// functions f = prod_z f_z over the colors z with xi(z) > 0. color_eta[z]
// is the Averaging state of color z; color_f[z] is f_z on Omega_{xi(z)}.
// Returns the larger of the residuals of the two per-edge operators
//   (x)_z (P_xy - 1)   and   (x)_z P_xy - 1.
double multicolor_intertwining_residual(const WeightedGraph& g, const SiteWeights& pi,
                                        std::span<const std::uint32_t> xi,
                                        std::span<const std::vector<double>> color_f,
                                        std::span<const SimplexPoint> color_eta, std::size_t edge_id);

}  // namespace avgbin
