#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "avgbin/graphs.hpp"
#include "avgbin/rng.hpp"

namespace avgbin {

// Probability vector over vertices: the Averaging state.
class SimplexPoint {
 public:
  // Entries >= 0 summing to 1 within 1e-12.
  explicit SimplexPoint(std::vector<double> eta);
  static SimplexPoint dirac(std::size_t n, Vertex x);
  static SimplexPoint from_weights(const SiteWeights& pi);
  // For internal callers that maintain the invariant themselves.
  static SimplexPoint unchecked(std::vector<double> eta);

  std::size_t size() const { return eta_.size(); }
  double operator[](std::size_t x) const { return eta_[x]; }
  std::span<const double> values() const { return eta_; }
  std::span<double> mutable_values() { return eta_; }

 private:
  struct NoCheck {};
  SimplexPoint(std::vector<double> eta, NoCheck) : eta_(std::move(eta)) {}
  std::vector<double> eta_;
};

// eta^{xy}: pool eta(x) + eta(y) and split it proportionally to pi(x), pi(y).
SimplexPoint edge_update(const SimplexPoint& eta, Vertex x, Vertex y, const SiteWeights& pi);
// In-place form used by the simulator. y's share is pooled - x's share, so
// the pair sum drifts from the pooled mass by at most one rounding.
void edge_update_in_place(std::span<double> eta, Vertex x, Vertex y, const SiteWeights& pi);

using EdgeUpdateFn = std::function<SimplexPoint(const SimplexPoint&, Vertex, Vertex, const SiteWeights&)>;
using SimplexFunction = std::function<double(const SimplexPoint&)>;

// sum_xy c_xy (f(eta^{xy}) - f(eta)).
double avg_generator_apply(const SimplexFunction& f, const SimplexPoint& eta, const WeightedGraph& g,
                           const SiteWeights& pi, const EdgeUpdateFn& update = edge_update);

std::vector<double> density(std::span<const double> eta, const SiteWeights& pi);
// |eta/pi - 1|_2^2 in L^2(pi).
double l2_distance_sq(std::span<const double> eta, const SiteWeights& pi);
// Change of |eta/pi - 1|_2^2 under the update on edge xy, recomputed from the
// updated vector.
double l2_drop(const SimplexPoint& eta, Vertex x, Vertex y, const SiteWeights& pi);
// -(pi(x) pi(y) / (pi(x) + pi(y))) (eta(x)/pi(x) - eta(y)/pi(y))^2
double l2_drop_closed_form(const SimplexPoint& eta, Vertex x, Vertex y, const SiteWeights& pi);

// |eta/pi - 1|_p in L^p(pi); p = infinity gives the max.
double transport_norm(std::span<const double> eta, const SiteWeights& pi, double p);

// Uniform point on the simplex (normalized exponentials).
SimplexPoint random_simplex_point(std::size_t n, CounterRng& rng);

}  // namespace avgbin
