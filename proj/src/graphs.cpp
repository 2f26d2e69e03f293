#include "avgbin/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "avgbin/rng.hpp"

namespace avgbin {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

std::vector<std::size_t> component_labels(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const Edge& e : edges) {
    const std::size_t a = find_root(parent, e.x), b = find_root(parent, e.y);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  for (std::size_t v = 0; v < n; ++v) parent[v] = find_root(parent, v);
  return parent;
}

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t volume = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw GraphError("lattice dimensions must be >= 1");
    volume *= d;
  }
  return volume;
}

// Nearest-neighbour bonds on a box, optionally periodic. Bonds are listed by
// increasing vertex index, then by dimension.
std::vector<Edge> lattice_edges(const std::vector<std::size_t>& dims, bool periodic, double c) {
  const std::size_t volume = product(dims);
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t d = dims.size(); d-- > 1;) stride[d - 1] = stride[d] * dims[d];
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < volume; ++v) {
    for (std::size_t d = 0; d < dims.size(); ++d) {
      const std::size_t coord = (v / stride[d]) % dims[d];
      if (coord + 1 < dims[d]) {
        edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(v + stride[d]), c});
      } else if (periodic && dims[d] > 2) {
        edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(v - coord * stride[d]), c});
      }
    }
  }
  return edges;
}

std::string dims_label(const std::vector<std::size_t>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "x" : "") + std::to_string(dims[i]);
  return s;
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Edge> edges, std::string name)
    : n_(n), edges_(std::move(edges)), name_(std::move(name)) {
  if (n_ == 0) throw GraphError("graph needs at least one vertex");
  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<std::size_t> degree(n_, 0);
  for (const Edge& e : edges_) {
    if (e.x < 0 || e.y < 0 || static_cast<std::size_t>(e.x) >= n_ || static_cast<std::size_t>(e.y) >= n_)
      throw GraphError("edge (" + std::to_string(e.x) + "," + std::to_string(e.y) + ") out of vertex range");
    if (e.x == e.y) throw GraphError("self-loop at vertex " + std::to_string(e.x));
    if (!(e.c > 0.0) || !std::isfinite(e.c))
      throw GraphError("conductance of edge (" + std::to_string(e.x) + "," + std::to_string(e.y) +
                       ") must be positive and finite");
    if (!seen.emplace(std::min(e.x, e.y), std::max(e.x, e.y)).second)
      throw GraphError("duplicate edge (" + std::to_string(e.x) + "," + std::to_string(e.y) + ")");
    ++degree[e.x];
    ++degree[e.y];
    total_c_ += e.c;
  }
  const auto labels = component_labels(n_, edges_);
  for (std::size_t v = 0; v < n_; ++v)
    if (labels[v] != 0) throw GraphError("graph is disconnected (vertex " + std::to_string(v) + " unreachable from 0)");

  adj_offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) adj_offsets_[v + 1] = adj_offsets_[v] + degree[v];
  adj_.resize(adj_offsets_[n_]);
  std::vector<std::size_t> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    adj_[fill[e.x]++] = {e.y, id};
    adj_[fill[e.y]++] = {e.x, id};
  }
}

std::span<const WeightedGraph::Incidence> WeightedGraph::neighbors(Vertex x) const {
  const auto v = static_cast<std::size_t>(x);
  return std::span<const Incidence>(adj_).subspan(adj_offsets_.at(v), adj_offsets_.at(v + 1) - adj_offsets_[v]);
}

SiteWeights::SiteWeights(std::vector<double> pi) : pi_(std::move(pi)) {
  if (pi_.empty()) throw std::invalid_argument("site weights must be non-empty");
  double total = 0.0;
  for (double p : pi_) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("site weights must be strictly positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "site weights sum to " << total << ", not 1";
    throw std::invalid_argument(msg.str());
  }
}

SiteWeights uniform_weights(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_weights needs n >= 1");
  return SiteWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double ellipticity_ratio(const SiteWeights& pi) {
  const auto [lo, hi] = std::minmax_element(pi.values().begin(), pi.values().end());
  return *hi / *lo;
}

SiteWeights random_elliptic_weights(std::size_t n, double ratio, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_elliptic_weights needs n >= 1");
  if (!(ratio >= 1.0)) throw std::invalid_argument("ellipticity ratio must be >= 1");
  CounterRng rng(seed, 0x5173);
  std::vector<double> w(n);
  for (double& v : w) v = 1.0 + (ratio - 1.0) * rng.uniform();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= total;
  return SiteWeights(std::move(w));
}

WeightedGraph path_graph(std::size_t n, double c) {
  if (n == 0) throw GraphError("path needs n >= 1");
  return WeightedGraph(n, lattice_edges({n}, false, c), "path(" + std::to_string(n) + ")");
}

WeightedGraph cycle_graph(std::size_t n, double c) {
  if (n == 0) throw GraphError("cycle needs n >= 1");
  return WeightedGraph(n, lattice_edges({n}, true, c), "cycle(" + std::to_string(n) + ")");
}

WeightedGraph torus_graph(const std::vector<std::size_t>& dims, double c) {
  if (dims.empty()) throw GraphError("torus needs at least one dimension");
  return WeightedGraph(product(dims), lattice_edges(dims, true, c), "torus(" + dims_label(dims) + ")");
}

WeightedGraph complete_graph(std::size_t n, double c) {
  if (n == 0) throw GraphError("complete graph needs n >= 1");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) edges.push_back({static_cast<Vertex>(x), static_cast<Vertex>(y), c});
  return WeightedGraph(n, std::move(edges), "complete(" + std::to_string(n) + ")");
}

WeightedGraph sierpinski_gasket(int level, double c) {
  if (level < 0 || level > 7) throw GraphError("sierpinski level must be in [0, 7]");
  using Point = std::pair<long, long>;  // (b, a) so std::map orders rows first
  std::set<std::pair<Point, Point>> segments;
  // Enumerate the 3^level unit triangles by recursive subdivision.
  std::vector<std::tuple<long, long, long>> stack{{0, 0, 1L << level}};
  while (!stack.empty()) {
    const auto [a, b, s] = stack.back();
    stack.pop_back();
    if (s == 1) {
      const Point p0{b, a}, p1{b, a + 1}, p2{b + 1, a};
      for (const auto& [u, v] : {std::pair{p0, p1}, std::pair{p0, p2}, std::pair{p1, p2}})
        segments.emplace(std::min(u, v), std::max(u, v));
      continue;
    }
    const long h = s / 2;
    stack.emplace_back(a, b, h);
    stack.emplace_back(a + h, b, h);
    stack.emplace_back(a, b + h, h);
  }
  std::map<Point, Vertex> index;
  for (const auto& [u, v] : segments) {
    index.emplace(u, 0);
    index.emplace(v, 0);
  }
  Vertex next = 0;
  for (auto& [p, id] : index) id = next++;
  std::vector<Edge> edges;
  edges.reserve(segments.size());
  for (const auto& [u, v] : segments) edges.push_back({index[u], index[v], c});
  std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) { return std::tie(l.x, l.y) < std::tie(r.x, r.y); });
  return WeightedGraph(index.size(), std::move(edges), "sierpinski(" + std::to_string(level) + ")");
}

PercolationCluster percolation_cluster(const std::vector<std::size_t>& dims, double p_open, std::uint64_t seed,
                                       double c) {
  if (dims.empty()) throw GraphError("percolation box needs at least one dimension");
  if (!(p_open > 0.0 && p_open <= 1.0)) throw GraphError("p_open must lie in (0, 1]");
  const std::size_t volume = product(dims);
  CounterRng rng(seed, 0x9e7c);
  std::vector<Edge> open;
  for (const Edge& e : lattice_edges(dims, false, c))
    if (rng.uniform() < p_open) open.push_back(e);

  const auto labels = component_labels(volume, open);
  std::vector<std::size_t> size(volume, 0);
  for (std::size_t v = 0; v < volume; ++v) ++size[labels[v]];
  // Ties go to the cluster containing the smallest box index.
  const std::size_t root = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
  const std::size_t cluster = size[root];
  if (cluster < 2 || 2 * cluster < volume) {
    throw PercolationRetry("largest open cluster has " + std::to_string(cluster) + " of " + std::to_string(volume) +
                           " sites (need >= 2 and >= half the box); retry with another seed or a larger p_open");
  }
  std::vector<Vertex> relabel(volume, -1);
  PercolationCluster out{WeightedGraph(1, {}), {}};
  for (std::size_t v = 0; v < volume; ++v) {
    if (labels[v] != root) continue;
    relabel[v] = static_cast<Vertex>(out.box_index.size());
    out.box_index.push_back(v);
  }
  std::vector<Edge> edges;
  for (const Edge& e : open)
    if (labels[e.x] == root) edges.push_back({relabel[e.x], relabel[e.y], e.c});
  out.graph = WeightedGraph(cluster, std::move(edges), "percolation(" + dims_label(dims) + ")");
  return out;
}

WeightedGraph with_conductances(const WeightedGraph& g, std::span<const double> c) {
  if (c.size() != g.num_edges())
    throw GraphError("expected " + std::to_string(g.num_edges()) + " conductances, got " + std::to_string(c.size()));
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].c = c[i];
  return WeightedGraph(g.num_vertices(), std::move(edges), g.name());
}

WeightedGraph random_conductances(const WeightedGraph& g, double lo, double hi, std::uint64_t seed) {
  if (!(lo > 0.0 && hi >= lo)) throw GraphError("random conductance range must satisfy 0 < lo <= hi");
  CounterRng rng(seed, 0xc0d);
  std::vector<double> c(g.num_edges());
  for (double& v : c) v = lo + (hi - lo) * rng.uniform();
  return with_conductances(g, c);
}

WeightedGraph build_graph(const GraphSpec& spec) {
  const double c0 = std::holds_alternative<double>(spec.conductance) ? std::get<double>(spec.conductance) : 1.0;
  WeightedGraph g = [&] {
    switch (spec.kind) {
      case GraphKind::path: return path_graph(spec.n, c0);
      case GraphKind::cycle: return cycle_graph(spec.n, c0);
      case GraphKind::torus: return torus_graph(spec.dims, c0);
      case GraphKind::complete: return complete_graph(spec.n, c0);
      case GraphKind::sierpinski: return sierpinski_gasket(spec.level, c0);
      case GraphKind::percolation_box: return percolation_cluster(spec.dims, spec.p_open, spec.seed, c0).graph;
      case GraphKind::custom: {
        std::size_t n = spec.custom_n;
        for (const Edge& e : spec.custom_edges) n = std::max<std::size_t>(n, std::max(e.x, e.y) + 1);
        return WeightedGraph(n, spec.custom_edges, "custom");
      }
    }
    throw GraphError("unknown graph kind");
  }();
  if (const auto* per_edge = std::get_if<std::vector<double>>(&spec.conductance)) return with_conductances(g, *per_edge);
  return g;
}

GraphKind parse_graph_kind(const std::string& name) {
  static const std::map<std::string, GraphKind> kinds{
      {"path", GraphKind::path},         {"cycle", GraphKind::cycle},
      {"torus", GraphKind::torus},       {"complete", GraphKind::complete},
      {"sierpinski", GraphKind::sierpinski}, {"percolation_box", GraphKind::percolation_box},
      {"custom", GraphKind::custom}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) throw GraphError("unknown graph kind '" + name + "'");
  return it->second;
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::path: return "path";
    case GraphKind::cycle: return "cycle";
    case GraphKind::torus: return "torus";
    case GraphKind::complete: return "complete";
    case GraphKind::sierpinski: return "sierpinski";
    case GraphKind::percolation_box: return "percolation_box";
    case GraphKind::custom: return "custom";
  }
  return "unknown";
}

std::vector<Edge> parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long x, y;
    double c;
    if (!(fields >> x)) continue;
    if (!(fields >> y >> c)) throw GraphError("edge list line " + std::to_string(lineno) + ": expected 'x y c_xy'");
    std::string extra;
    if (fields >> extra) throw GraphError("edge list line " + std::to_string(lineno) + ": trailing field '" + extra + "'");
    edges.push_back({static_cast<Vertex>(x), static_cast<Vertex>(y), c});
  }
  return edges;
}

WeightedGraph read_edge_list(std::istream& in, std::string name) {
  auto edges = parse_edge_list(in);
  std::size_t n = 0;
  for (const Edge& e : edges) {
    if (e.x < 0 || e.y < 0) throw GraphError("negative vertex id in edge list");
    n = std::max<std::size_t>(n, std::max(e.x, e.y) + 1);
  }
  return WeightedGraph(std::max<std::size_t>(n, 1), std::move(edges), std::move(name));
}

WeightedGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open edge list '" + path + "'");
  return read_edge_list(in, path);
}

SiteWeights read_site_weights(std::istream& in) {
  std::vector<double> w;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double v;
    if (fields >> v) w.push_back(v);
  }
  return SiteWeights(std::move(w));
}

SiteWeights read_site_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open site weights '" + path + "'");
  return read_site_weights(in);
}

std::vector<std::tuple<std::size_t, std::size_t, double>> degree_signature(const WeightedGraph& g) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> sig;
  for (const Edge& e : g.edges()) {
    const std::size_t dx = g.neighbors(e.x).size(), dy = g.neighbors(e.y).size();
    sig.emplace_back(std::min(dx, dy), std::max(dx, dy), e.c);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

}  // namespace avgbin
