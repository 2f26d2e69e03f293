#include "avgbin/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace avgbin {

SimplexPoint::SimplexPoint(std::vector<double> eta) : eta_(std::move(eta)) {
  if (eta_.empty()) throw std::invalid_argument("simplex point must be non-empty");
  double total = 0.0, comp = 0.0;
  for (double v : eta_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("simplex point entries must be >= 0");
    // Kahan summation so the check itself adds no drift.
    const double y = v - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "simplex point sums to " << total << ", not 1";
    throw std::invalid_argument(msg.str());
  }
}

SimplexPoint SimplexPoint::dirac(std::size_t n, Vertex x) {
  if (x < 0 || static_cast<std::size_t>(x) >= n) throw std::invalid_argument("dirac: vertex out of range");
  std::vector<double> eta(n, 0.0);
  eta[static_cast<std::size_t>(x)] = 1.0;
  return SimplexPoint(std::move(eta), NoCheck{});
}

SimplexPoint SimplexPoint::from_weights(const SiteWeights& pi) {
  return SimplexPoint(std::vector<double>(pi.values().begin(), pi.values().end()), NoCheck{});
}

SimplexPoint SimplexPoint::unchecked(std::vector<double> eta) { return SimplexPoint(std::move(eta), NoCheck{}); }

void edge_update_in_place(std::span<double> eta, Vertex x, Vertex y, const SiteWeights& pi) {
  if (x == y) throw std::invalid_argument("edge_update: endpoints must differ");
  const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
  const double pooled = eta[ux] + eta[uy];
  const double share_x = pooled * (pi[ux] / (pi[ux] + pi[uy]));
  eta[ux] = share_x;
  eta[uy] = pooled - share_x;
}

SimplexPoint edge_update(const SimplexPoint& eta, Vertex x, Vertex y, const SiteWeights& pi) {
  if (eta.size() != pi.size()) throw std::invalid_argument("edge_update: dimension mismatch");
  if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= eta.size() || static_cast<std::size_t>(y) >= eta.size())
    throw std::invalid_argument("edge_update: vertex out of range");
  std::vector<double> out(eta.values().begin(), eta.values().end());
  edge_update_in_place(out, x, y, pi);
  return SimplexPoint::unchecked(std::move(out));
}

double avg_generator_apply(const SimplexFunction& f, const SimplexPoint& eta, const WeightedGraph& g,
                           const SiteWeights& pi, const EdgeUpdateFn& update) {
  const double f0 = f(eta);
  double total = 0.0;
  for (const Edge& e : g.edges()) total += e.c * (f(update(eta, e.x, e.y, pi)) - f0);
  return total;
}

std::vector<double> density(std::span<const double> eta, const SiteWeights& pi) {
  if (eta.size() != pi.size()) throw std::invalid_argument("density: dimension mismatch");
  std::vector<double> h(eta.size());
  for (std::size_t x = 0; x < eta.size(); ++x) h[x] = eta[x] / pi[x];
  return h;
}

double l2_distance_sq(std::span<const double> eta, const SiteWeights& pi) {
  if (eta.size() != pi.size()) throw std::invalid_argument("l2_distance_sq: dimension mismatch");
  double s = 0.0;
  for (std::size_t x = 0; x < eta.size(); ++x) {
    const double d = eta[x] / pi[x] - 1.0;
    s += pi[x] * d * d;
  }
  return s;
}

double l2_drop(const SimplexPoint& eta, Vertex x, Vertex y, const SiteWeights& pi) {
  // Only the x and y terms change; differencing those two avoids the
  // cancellation of subtracting two full sums.
  const auto term = [&](double mass, std::size_t v) {
    const double d = mass / pi[v] - 1.0;
    return pi[v] * d * d;
  };
  const SimplexPoint after = edge_update(eta, x, y, pi);
  const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
  return (term(after[ux], ux) + term(after[uy], uy)) - (term(eta[ux], ux) + term(eta[uy], uy));
}

double l2_drop_closed_form(const SimplexPoint& eta, Vertex x, Vertex y, const SiteWeights& pi) {
  const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
  const double d = eta[ux] / pi[ux] - eta[uy] / pi[uy];
  return -(pi[ux] * pi[uy] / (pi[ux] + pi[uy])) * d * d;
}

double transport_norm(std::span<const double> eta, const SiteWeights& pi, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("transport_norm: p must be >= 1");
  if (eta.size() != pi.size()) throw std::invalid_argument("transport_norm: dimension mismatch");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t x = 0; x < eta.size(); ++x) m = std::max(m, std::abs(eta[x] / pi[x] - 1.0));
    return m;
  }
  double s = 0.0;
  for (std::size_t x = 0; x < eta.size(); ++x) s += pi[x] * std::pow(std::abs(eta[x] / pi[x] - 1.0), p);
  return p == 1.0 ? s : p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

SimplexPoint random_simplex_point(std::size_t n, CounterRng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& v : w) total += (v = -std::log(rng.uniform()));
  for (double& v : w) v /= total;
  return SimplexPoint(std::move(w));
}

}  // namespace avgbin
