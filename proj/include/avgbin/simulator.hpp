#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "avgbin/averaging.hpp"
#include "avgbin/graphs.hpp"
#include "avgbin/rng.hpp"
#include "avgbin/state_space.hpp"

namespace avgbin {

enum class CouplingMode { fast_binomial, per_particle_bernoulli };

struct SimOptions {
  double t_end = 0.0;
  // Sorted times in [0, t_end]; empty means {t_end}.
  std::vector<double> record_times;
  std::uint64_t seed = 0;
  std::uint64_t replica_id = 0;
  CouplingMode mode = CouplingMode::fast_binomial;
};

struct Event {
  double dt;
  std::size_t edge;
};

// Gillespie scheduling: one Exponential(R) clock with R the total
// conductance, and the ringing edge drawn from a Walker/Vose alias table.
class EdgeSampler {
 public:
  explicit EdgeSampler(const WeightedGraph& g);

  double total_rate() const { return total_; }
  std::size_t sample_edge(CounterRng& rng) const;
  // Consumes two draws: the waiting time, then the edge.
  Event next_event(CounterRng& rng) const;

 private:
  double total_ = 0.0;
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

Event next_event(const WeightedGraph& g, CounterRng& rng);

struct SimStats {
  std::uint64_t events = 0;
  // Averaging only: times the mass drifted more than 1e-12 from 1 and was
  // rescaled.
  std::uint64_t renormalizations = 0;
};

// Per-color occupations, colors indexed by source vertex (one entry per
// vertex, all zero for vertices that started with no particles).
struct ColoredConfig {
  std::vector<ParticleConfig> colors;
  ParticleConfig color_sum() const;
};

// Each call owns its RNG stream CounterRng(seed, replica_id); identical
// options give bit-identical output.
std::vector<SimplexPoint> simulate_averaging(const WeightedGraph& g, const SiteWeights& pi, const SimplexPoint& eta0,
                                             const SimOptions& opts, SimStats* stats = nullptr);
// Per event on edge xy with m = xi(x) + xi(y) particles: fast_binomial draws
// xi'(x) ~ Binomial(m, p) once; per_particle_bernoulli draws one Bernoulli(p)
// per particle, particles at x before particles at y.
std::vector<ParticleConfig> simulate_bin(const WeightedGraph& g, const SiteWeights& pi, const ParticleConfig& xi0,
                                         const SimOptions& opts, SimStats* stats = nullptr);
// Particles on the edge draw Bernoulli(p) in index order (mode ignored).
std::vector<std::vector<Vertex>> simulate_bin_labeled(const WeightedGraph& g, const SiteWeights& pi,
                                                      std::span<const Vertex> xs0, const SimOptions& opts,
                                                      SimStats* stats = nullptr);
// Colors ordered by source vertex; within a color, particles at x before
// particles at y. The total number of Bernoulli draws per event equals that
// of simulate_bin in per-particle mode, so the color sum reproduces it
// pathwise under the same seed. Requires per_particle_bernoulli.
std::vector<ColoredConfig> simulate_multicolored(const WeightedGraph& g, const SiteWeights& pi,
                                                 const ParticleConfig& xi0, const SimOptions& opts,
                                                 SimStats* stats = nullptr);

// Trajectory CSV: "replica,t,<state columns>". Column layouts:
//   averaging     eta_0 .. eta_{n-1}
//   bin           xi_0 .. xi_{n-1}
//   labeled       x_0 .. x_{k-1}
//   multicolored  c<z>_v<v> for z, v in 0..n-1 (color-major)
enum class TrajectoryKind { averaging, bin, labeled, multicolored };
std::string trajectory_header(TrajectoryKind kind, std::size_t n, std::size_t k = 0);
void write_trajectory_row(std::ostream& out, std::size_t replica, double t, std::span<const double> state);
void write_trajectory_row(std::ostream& out, std::size_t replica, double t, std::span<const std::uint32_t> state);
void write_trajectory_row(std::ostream& out, std::size_t replica, double t, std::span<const Vertex> state);
void write_trajectory_row(std::ostream& out, std::size_t replica, double t, const ColoredConfig& state);

}  // namespace avgbin
