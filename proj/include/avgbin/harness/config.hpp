#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "avgbin/graphs.hpp"

namespace avgbin::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeGridSpec {
  // absolute: t = s; trel: t = s t_rel; tmix: t = t_mix + s t_rel, with
  // t_mix = (t_rel/2) log k.
  enum class Mode { absolute, trel, tmix };
  enum class Spacing { linear, log };
  Mode mode = Mode::trel;
  Spacing spacing = Spacing::linear;
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 11;
  std::vector<double> values;  // explicit s values; overrides start/stop/points
  // Window multiples C for the t^+-(C) = t_mix +- C t_rel annotations.
  std::vector<double> window_c{1.0, 2.0, 3.0};
};

struct RandomConductance {
  double lo = 1.0;
  double hi = 1.0;
  std::uint64_t seed = 0;
};

struct GraphEntry {
  GraphSpec spec;
  // Applied after the build, replacing any fixed conductances.
  std::optional<RandomConductance> random_conductance;
  std::string edges_file;  // custom graphs
  std::string label;       // defaults to the graph name
  // Per-graph grid for sweeps; falls back to the experiment grid.
  std::optional<TimeGridSpec> time_grid;
};

struct WeightsSpec {
  enum class Kind { uniform, elliptic, values, file };
  Kind kind = Kind::uniform;
  double ratio = 2.0;  // elliptic: max/min bound
  std::uint64_t seed = 0;
  std::vector<double> values;
  std::string path;
};

struct InitialSpec {
  enum class Kind { dirac, uniform_random, values };
  Kind kind = Kind::dirac;
  Vertex vertex = 0;
  std::vector<double> values;
};

enum class Process { bin, avg, multicolored };

struct ExperimentConfig {
  std::string id = "experiment";
  GraphEntry graph;
  std::vector<GraphEntry> graphs;  // gap sweeps; empty means {graph}
  WeightsSpec weights;
  Process process = Process::bin;
  std::vector<std::size_t> k{1};
  TimeGridSpec time_grid;
  std::size_t replicas = 1000;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  double p = 2.0;
  std::string output = "out";
  int threads = 0;
  // Exact profile when |Omega_k| is at most this, bounds otherwise.
  std::size_t exact_threshold = 200'000;
  // Pile starts tried for the worst-case profile.
  std::size_t max_starts = 16;
  // Random simplex points added to the Dirac starts for sup_eta quantities.
  std::size_t sup_random_points = 100;
  InitialSpec initial;
};

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);

WeightedGraph build_graph(const GraphEntry& entry);
SiteWeights build_weights(const WeightsSpec& spec, std::size_t n);
std::vector<double> build_initial(const InitialSpec& spec, std::size_t n, std::uint64_t seed);

// Concrete, strictly increasing times for one k.
std::vector<double> resolve_time_grid(const TimeGridSpec& spec, double t_rel, std::size_t k);

std::string to_string(Process p);

}  // namespace avgbin::harness
