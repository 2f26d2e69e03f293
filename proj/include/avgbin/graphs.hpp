#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace avgbin {

using Vertex = std::int32_t;

struct Edge {
  Vertex x;
  Vertex y;
  double c;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a percolation draw leaves too small a cluster; another seed or
// a larger p_open usually fixes it.
class PercolationRetry : public GraphError {
 public:
  using GraphError::GraphError;
};

// Connected, undirected, loop-free graph with positive conductances.
// Immutable after construction.
class WeightedGraph {
 public:
  struct Incidence {
    Vertex neighbor;
    std::size_t edge_id;
  };

  WeightedGraph(std::size_t n, std::vector<Edge> edges, std::string name = "custom");

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t id) const { return edges_.at(id); }
  std::span<const Incidence> neighbors(Vertex x) const;
  double total_conductance() const { return total_c_; }
  const std::string& name() const { return name_; }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adj_offsets_;
  std::vector<Incidence> adj_;
  double total_c_ = 0.0;
  std::string name_;
};

class SiteWeights {
 public:
  explicit SiteWeights(std::vector<double> pi);

  std::size_t size() const { return pi_.size(); }
  double operator[](std::size_t x) const { return pi_[x]; }
  std::span<const double> values() const { return pi_; }

 private:
  std::vector<double> pi_;
};

SiteWeights uniform_weights(std::size_t n);
double ellipticity_ratio(const SiteWeights& pi);
// Weights proportional to i.i.d. Uniform[1, ratio] draws: max/min <= ratio.
SiteWeights random_elliptic_weights(std::size_t n, double ratio, std::uint64_t seed);

// Vertex i is position i along the path / around the cycle.
WeightedGraph path_graph(std::size_t n, double c = 1.0);
// n = 1: single vertex; n = 2: single edge (no doubled wrap edge).
WeightedGraph cycle_graph(std::size_t n, double c = 1.0);
// Row-major coordinates: index = ((i_0 * d_1 + i_1) * d_2 + i_2) ...
// Dimensions of size 2 get one edge, not a doubled wrap edge.
WeightedGraph torus_graph(const std::vector<std::size_t>& dims, double c = 1.0);
WeightedGraph complete_graph(std::size_t n, double c = 1.0);
// Level-L gasket approximation. Vertices are lattice points a*e1 + b*e2 with
// e1 = (1, 0), e2 = (1/2, sqrt(3)/2), corners (0,0), (2^L,0), (0,2^L),
// indexed in increasing (b, a) order. Unit conductances, L <= 7.
WeightedGraph sierpinski_gasket(int level, double c = 1.0);

struct PercolationCluster {
  WeightedGraph graph;
  // box_index[v] is the row-major box coordinate index of cluster vertex v;
  // cluster vertices keep the box order.
  std::vector<std::size_t> box_index;
};
// Bond percolation on the box lattice (open boundary): each nearest-neighbour
// bond is open with probability p_open. Keeps the largest open cluster and
// requires it to hold at least half of the box.
PercolationCluster percolation_cluster(const std::vector<std::size_t>& dims, double p_open,
                                       std::uint64_t seed, double c = 1.0);

// Replace conductances, one per edge in edge order.
WeightedGraph with_conductances(const WeightedGraph& g, std::span<const double> c);
WeightedGraph random_conductances(const WeightedGraph& g, double lo, double hi, std::uint64_t seed);

enum class GraphKind { path, cycle, torus, complete, sierpinski, percolation_box, custom };

struct GraphSpec {
  GraphKind kind = GraphKind::cycle;
  std::size_t n = 0;                 // path, cycle, complete
  std::vector<std::size_t> dims;     // torus, percolation_box
  int level = 0;                     // sierpinski
  double p_open = 1.0;               // percolation_box
  std::uint64_t seed = 0;            // percolation_box
  std::size_t custom_n = 0;          // custom; 0 means 1 + largest vertex id
  std::vector<Edge> custom_edges;    // custom
  std::variant<double, std::vector<double>> conductance = 1.0;
};

WeightedGraph build_graph(const GraphSpec& spec);
GraphKind parse_graph_kind(const std::string& name);
std::string to_string(GraphKind kind);

// Lines "x y c", '#' starts a comment.
WeightedGraph read_edge_list(std::istream& in, std::string name = "custom");
WeightedGraph read_edge_list_file(const std::string& path);
std::vector<Edge> parse_edge_list(std::istream& in);
// One real per line, '#' comments allowed.
SiteWeights read_site_weights(std::istream& in);
SiteWeights read_site_weights_file(const std::string& path);

// Canonical invariant for isomorphism spot checks: sorted list of
// (min deg, max deg, c) over edges.
std::vector<std::tuple<std::size_t, std::size_t, double>> degree_signature(const WeightedGraph& g);

}  // namespace avgbin
