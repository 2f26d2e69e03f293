#include "avgbin/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "avgbin/binomial.hpp"
#include "avgbin/format.hpp"

namespace avgbin {

namespace {

void validate(const SimOptions& opts) {
  if (!(opts.t_end >= 0.0) || !std::isfinite(opts.t_end)) throw std::invalid_argument("t_end must be finite and >= 0");
  double prev = 0.0;
  for (double t : opts.record_times) {
    if (!(t >= prev) || t > opts.t_end)
      throw std::invalid_argument("record_times must be sorted and lie in [0, t_end]");
    prev = t;
  }
}

std::vector<double> record_times(const SimOptions& opts) {
  return opts.record_times.empty() ? std::vector<double>{opts.t_end} : opts.record_times;
}

// Drives the event loop. record(i) sees the state after every event at or
// before record time i.
template <class Apply, class Record>
void run_events(const WeightedGraph& g, const SimOptions& opts, SimStats* stats, Apply&& apply, Record&& record) {
  validate(opts);
  const auto times = record_times(opts);
  std::size_t next = 0;
  if (g.num_edges() > 0) {
    const EdgeSampler sampler(g);
    CounterRng rng(opts.seed, opts.replica_id);
    double t = 0.0;
    for (;;) {
      const Event ev = sampler.next_event(rng);
      const double t_next = t + ev.dt;
      while (next < times.size() && times[next] < t_next) record(next++);
      if (t_next > opts.t_end) break;
      apply(ev.edge, rng);
      if (stats) ++stats->events;
      t = t_next;
    }
  }
  while (next < times.size()) record(next++);
}

double edge_bias(const SiteWeights& pi, const Edge& e) { return pi[e.x] / (pi[e.x] + pi[e.y]); }

std::uint32_t count_successes(std::uint32_t m, double p, CounterRng& rng) {
  std::uint32_t j = 0;
  for (std::uint32_t i = 0; i < m; ++i) j += rng.uniform() < p;
  return j;
}

void check_inputs(const WeightedGraph& g, const SiteWeights& pi, std::size_t state_size) {
  if (pi.size() != g.num_vertices() || state_size != g.num_vertices())
    throw std::invalid_argument("graph, weights and initial state disagree on the vertex count");
}

}  // namespace

EdgeSampler::EdgeSampler(const WeightedGraph& g) {
  const std::size_t m = g.num_edges();
  if (m == 0) throw std::invalid_argument("EdgeSampler: graph has no edges");
  total_ = g.total_conductance();
  prob_.resize(m);
  alias_.resize(m);
  std::vector<double> scaled(m);
  std::vector<std::size_t> small, large;
  for (std::size_t e = 0; e < m; ++e) {
    scaled[e] = g.edge(e).c * static_cast<double>(m) / total_;
    (scaled[e] < 1.0 ? small : large).push_back(e);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back(), l = large.back();
    small.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t e : large) prob_[e] = 1.0, alias_[e] = e;
  for (std::size_t e : small) prob_[e] = 1.0, alias_[e] = e;
}

std::size_t EdgeSampler::sample_edge(CounterRng& rng) const {
  const double u = rng.uniform() * static_cast<double>(prob_.size());
  const auto column = std::min(static_cast<std::size_t>(u), prob_.size() - 1);
  return (u - static_cast<double>(column)) < prob_[column] ? column : alias_[column];
}

Event EdgeSampler::next_event(CounterRng& rng) const {
  const double dt = rng.exponential(total_);
  return {dt, sample_edge(rng)};
}

Event next_event(const WeightedGraph& g, CounterRng& rng) { return EdgeSampler(g).next_event(rng); }

ParticleConfig ColoredConfig::color_sum() const {
  std::size_t n = 0;
  for (const auto& c : colors) n = std::max(n, c.size());
  ParticleConfig sum(n, 0);
  for (const auto& c : colors)
    for (std::size_t v = 0; v < c.size(); ++v) sum[v] += c[v];
  return sum;
}

std::vector<SimplexPoint> simulate_averaging(const WeightedGraph& g, const SiteWeights& pi, const SimplexPoint& eta0,
                                             const SimOptions& opts, SimStats* stats) {
  check_inputs(g, pi, eta0.size());
  std::vector<double> eta(eta0.values().begin(), eta0.values().end());
  double mass = std::accumulate(eta.begin(), eta.end(), 0.0);
  std::vector<SimplexPoint> out;
  run_events(
      g, opts, stats,
      [&](std::size_t edge, CounterRng&) {
        const Edge& e = g.edge(edge);
        const double before = eta[e.x] + eta[e.y];
        edge_update_in_place(eta, e.x, e.y, pi);
        mass += (eta[e.x] + eta[e.y]) - before;
        if (std::abs(mass - 1.0) > 1e-12) {
          double total = 0.0, comp = 0.0;
          for (double v : eta) {
            const double y = v - comp, t = total + y;
            comp = (t - total) - y;
            total = t;
          }
          if (std::abs(total - 1.0) > 1e-12) {
            for (double& v : eta) v /= total;
            if (stats) ++stats->renormalizations;
          }
          mass = 1.0;
        }
      },
      [&](std::size_t) { out.push_back(SimplexPoint::unchecked(eta)); });
  return out;
}

std::vector<ParticleConfig> simulate_bin(const WeightedGraph& g, const SiteWeights& pi, const ParticleConfig& xi0,
                                         const SimOptions& opts, SimStats* stats) {
  check_inputs(g, pi, xi0.size());
  ParticleConfig xi = xi0;
  std::vector<ParticleConfig> out;
  const bool fast = opts.mode == CouplingMode::fast_binomial;
  run_events(
      g, opts, stats,
      [&](std::size_t edge, CounterRng& rng) {
        const Edge& e = g.edge(edge);
        const std::uint32_t m = xi[e.x] + xi[e.y];
        if (m == 0) return;
        const double p = edge_bias(pi, e);
        const std::uint32_t j = fast ? sample_binomial(m, p, rng) : count_successes(m, p, rng);
        xi[e.x] = j;
        xi[e.y] = m - j;
      },
      [&](std::size_t) { out.push_back(xi); });
  return out;
}

std::vector<std::vector<Vertex>> simulate_bin_labeled(const WeightedGraph& g, const SiteWeights& pi,
                                                      std::span<const Vertex> xs0, const SimOptions& opts,
                                                      SimStats* stats) {
  if (pi.size() != g.num_vertices()) throw std::invalid_argument("weights do not match the graph");
  for (Vertex x : xs0)
    if (x < 0 || static_cast<std::size_t>(x) >= g.num_vertices())
      throw std::invalid_argument("labeled particle outside the vertex set");
  std::vector<Vertex> xs(xs0.begin(), xs0.end());
  std::vector<std::vector<Vertex>> out;
  run_events(
      g, opts, stats,
      [&](std::size_t edge, CounterRng& rng) {
        const Edge& e = g.edge(edge);
        const double p = edge_bias(pi, e);
        for (Vertex& x : xs)
          if (x == e.x || x == e.y) x = rng.uniform() < p ? e.x : e.y;
      },
      [&](std::size_t) { out.push_back(xs); });
  return out;
}

std::vector<ColoredConfig> simulate_multicolored(const WeightedGraph& g, const SiteWeights& pi,
                                                 const ParticleConfig& xi0, const SimOptions& opts,
                                                 SimStats* stats) {
  if (opts.mode != CouplingMode::per_particle_bernoulli)
    throw std::invalid_argument(
        "simulate_multicolored needs per_particle_bernoulli: one Binomial draw per edge cannot be split across "
        "colors consistently, and the color sum must reproduce the uncolored chain pathwise");
  check_inputs(g, pi, xi0.size());
  const std::size_t n = g.num_vertices();
  ColoredConfig state;
  state.colors.assign(n, ParticleConfig(n, 0));
  for (std::size_t z = 0; z < n; ++z) state.colors[z][z] = xi0[z];
  std::vector<ColoredConfig> out;
  run_events(
      g, opts, stats,
      [&](std::size_t edge, CounterRng& rng) {
        const Edge& e = g.edge(edge);
        const double p = edge_bias(pi, e);
        for (auto& color : state.colors) {
          const std::uint32_t m = color[e.x] + color[e.y];
          if (m == 0) continue;
          const std::uint32_t j = count_successes(m, p, rng);
          color[e.x] = j;
          color[e.y] = m - j;
        }
      },
      [&](std::size_t) { out.push_back(state); });
  return out;
}

std::string trajectory_header(TrajectoryKind kind, std::size_t n, std::size_t k) {
  std::string h = "replica,t";
  switch (kind) {
    case TrajectoryKind::averaging:
      for (std::size_t v = 0; v < n; ++v) h += ",eta_" + std::to_string(v);
      break;
    case TrajectoryKind::bin:
      for (std::size_t v = 0; v < n; ++v) h += ",xi_" + std::to_string(v);
      break;
    case TrajectoryKind::labeled:
      for (std::size_t a = 0; a < k; ++a) h += ",x_" + std::to_string(a);
      break;
    case TrajectoryKind::multicolored:
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t v = 0; v < n; ++v) h += ",c" + std::to_string(z) + "_v" + std::to_string(v);
      break;
  }
  return h;
}

void write_trajectory_row(std::ostream& out, std::size_t replica, double t, std::span<const double> state) {
  out << replica << ',' << format_double(t);
  for (double v : state) out << ',' << format_double(v);
  out << '\n';
}

void write_trajectory_row(std::ostream& out, std::size_t replica, double t, std::span<const std::uint32_t> state) {
  out << replica << ',' << format_double(t);
  for (std::uint32_t v : state) out << ',' << v;
  out << '\n';
}

void write_trajectory_row(std::ostream& out, std::size_t replica, double t, std::span<const Vertex> state) {
  out << replica << ',' << format_double(t);
  for (Vertex v : state) out << ',' << v;
  out << '\n';
}

void write_trajectory_row(std::ostream& out, std::size_t replica, double t, const ColoredConfig& state) {
  out << replica << ',' << format_double(t);
  for (const auto& color : state.colors)
    for (std::uint32_t v : color) out << ',' << v;
  out << '\n';
}

}  // namespace avgbin
