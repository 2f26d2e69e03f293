#include "avgbin/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "avgbin/averaging.hpp"
#include "avgbin/rng.hpp"

namespace avgbin::harness {

namespace {

template <class T>
T get(const YAML::Node& node, const char* key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const YAML::Node& node, std::initializer_list<const char*> known, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

TimeGridSpec parse_time_grid(const YAML::Node& node);

GraphEntry parse_graph(const YAML::Node& node) {
  reject_unknown(node,
                 {"kind", "n", "dims", "level", "p_open", "seed", "edges_file", "conductance", "label", "time_grid"},
                 "graph");
  GraphEntry e;
  try {
    e.spec.kind = parse_graph_kind(get<std::string>(node, "kind", "cycle"));
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  e.spec.n = get<std::size_t>(node, "n", 0);
  e.spec.dims = get<std::vector<std::size_t>>(node, "dims", {});
  e.spec.level = get<int>(node, "level", 0);
  e.spec.p_open = get<double>(node, "p_open", 1.0);
  e.spec.seed = get<std::uint64_t>(node, "seed", 0);
  e.edges_file = get<std::string>(node, "edges_file", "");
  e.label = get<std::string>(node, "label", "");
  if (node["time_grid"]) e.time_grid = parse_time_grid(node["time_grid"]);
  if (const YAML::Node c = node["conductance"]) {
    if (c.IsScalar()) {
      e.spec.conductance = c.as<double>();
    } else if (c.IsSequence()) {
      e.spec.conductance = c.as<std::vector<double>>();
    } else if (c.IsMap()) {
      reject_unknown(c, {"random", "seed"}, "graph.conductance");
      const auto range = get<std::vector<double>>(c, "random", {});
      if (range.size() != 2) throw ConfigError("graph.conductance.random must be [lo, hi]");
      e.random_conductance = RandomConductance{range[0], range[1], get<std::uint64_t>(c, "seed", 0)};
    }
  }
  return e;
}

WeightsSpec parse_weights(const YAML::Node& node) {
  reject_unknown(node, {"kind", "ratio", "seed", "values", "path"}, "weights");
  WeightsSpec w;
  const auto kind = get<std::string>(node, "kind", "uniform");
  if (kind == "uniform") w.kind = WeightsSpec::Kind::uniform;
  else if (kind == "elliptic") w.kind = WeightsSpec::Kind::elliptic;
  else if (kind == "values") w.kind = WeightsSpec::Kind::values;
  else if (kind == "file") w.kind = WeightsSpec::Kind::file;
  else throw ConfigError("weights.kind must be uniform, elliptic, values or file");
  w.ratio = get<double>(node, "ratio", 2.0);
  w.seed = get<std::uint64_t>(node, "seed", 0);
  w.values = get<std::vector<double>>(node, "values", {});
  w.path = get<std::string>(node, "path", "");
  return w;
}

TimeGridSpec parse_time_grid(const YAML::Node& node) {
  reject_unknown(node, {"mode", "spacing", "start", "stop", "points", "values", "window_c"}, "time_grid");
  TimeGridSpec g;
  const auto mode = get<std::string>(node, "mode", "trel");
  if (mode == "absolute") g.mode = TimeGridSpec::Mode::absolute;
  else if (mode == "trel") g.mode = TimeGridSpec::Mode::trel;
  else if (mode == "tmix") g.mode = TimeGridSpec::Mode::tmix;
  else throw ConfigError("time_grid.mode must be absolute, trel or tmix");
  const auto spacing = get<std::string>(node, "spacing", "linear");
  if (spacing == "linear") g.spacing = TimeGridSpec::Spacing::linear;
  else if (spacing == "log") g.spacing = TimeGridSpec::Spacing::log;
  else throw ConfigError("time_grid.spacing must be linear or log");
  g.start = get<double>(node, "start", g.start);
  g.stop = get<double>(node, "stop", g.stop);
  g.points = get<std::size_t>(node, "points", g.points);
  g.values = get<std::vector<double>>(node, "values", {});
  g.window_c = get<std::vector<double>>(node, "window_c", g.window_c);
  return g;
}

InitialSpec parse_initial(const YAML::Node& node) {
  reject_unknown(node, {"kind", "vertex", "values"}, "initial");
  InitialSpec s;
  const auto kind = get<std::string>(node, "kind", "dirac");
  if (kind == "dirac") s.kind = InitialSpec::Kind::dirac;
  else if (kind == "uniform_random") s.kind = InitialSpec::Kind::uniform_random;
  else if (kind == "values") s.kind = InitialSpec::Kind::values;
  else throw ConfigError("initial.kind must be dirac, uniform_random or values");
  s.vertex = get<Vertex>(node, "vertex", 0);
  s.values = get<std::vector<double>>(node, "values", {});
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root || root.IsNull()) return {};
  reject_unknown(root,
                 {"id", "graph", "graphs", "weights", "process", "k", "time_grid", "replicas", "seed", "tolerance",
                  "p", "output", "threads", "exact_threshold", "max_starts", "sup_random_points", "initial"},
                 "config");
  ExperimentConfig c;
  c.id = get<std::string>(root, "id", c.id);
  if (root["graph"]) c.graph = parse_graph(root["graph"]);
  if (const YAML::Node gs = root["graphs"]) {
    if (!gs.IsSequence()) throw ConfigError("graphs must be a list");
    for (const auto& g : gs) c.graphs.push_back(parse_graph(g));
  }
  if (root["weights"]) c.weights = parse_weights(root["weights"]);
  const auto process = get<std::string>(root, "process", "bin");
  if (process == "bin") c.process = Process::bin;
  else if (process == "avg") c.process = Process::avg;
  else if (process == "multicolored") c.process = Process::multicolored;
  else throw ConfigError("process must be bin, avg or multicolored");
  if (const YAML::Node k = root["k"]) {
    c.k = k.IsSequence() ? k.as<std::vector<std::size_t>>() : std::vector<std::size_t>{k.as<std::size_t>()};
  }
  if (root["time_grid"]) c.time_grid = parse_time_grid(root["time_grid"]);
  c.replicas = get<std::size_t>(root, "replicas", c.replicas);
  c.seed = get<std::uint64_t>(root, "seed", c.seed);
  c.tolerance = get<double>(root, "tolerance", c.tolerance);
  c.p = get<double>(root, "p", c.p);
  c.output = get<std::string>(root, "output", c.output);
  c.threads = get<int>(root, "threads", c.threads);
  c.exact_threshold = get<std::size_t>(root, "exact_threshold", c.exact_threshold);
  c.max_starts = get<std::size_t>(root, "max_starts", c.max_starts);
  c.sup_random_points = get<std::size_t>(root, "sup_random_points", c.sup_random_points);
  if (root["initial"]) c.initial = parse_initial(root["initial"]);

  if (c.k.empty()) throw ConfigError("k list is empty");
  if (!(c.tolerance > 0.0 && c.tolerance <= 1e-6)) throw ConfigError("tolerance must lie in (0, 1e-6]");
  if (!(c.p >= 1.0)) throw ConfigError("p must be >= 1");
  if (c.time_grid.points == 0 && c.time_grid.values.empty()) throw ConfigError("time_grid has no points");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

WeightedGraph build_graph(const GraphEntry& entry) {
  GraphSpec spec = entry.spec;
  if (spec.kind == GraphKind::custom && !entry.edges_file.empty()) {
    std::ifstream in(entry.edges_file);
    if (!in) throw ConfigError("cannot open edge list " + entry.edges_file);
    spec.custom_edges = parse_edge_list(in);
  }
  WeightedGraph g = avgbin::build_graph(spec);
  if (entry.random_conductance) {
    const auto& r = *entry.random_conductance;
    g = random_conductances(g, r.lo, r.hi, r.seed);
  }
  if (!entry.label.empty()) g = WeightedGraph(g.num_vertices(), std::vector<Edge>(g.edges().begin(), g.edges().end()),
                                              entry.label);
  return g;
}

SiteWeights build_weights(const WeightsSpec& spec, std::size_t n) {
  switch (spec.kind) {
    case WeightsSpec::Kind::uniform:
      return uniform_weights(n);
    case WeightsSpec::Kind::elliptic:
      return random_elliptic_weights(n, spec.ratio, spec.seed);
    case WeightsSpec::Kind::values:
      if (spec.values.size() != n) throw ConfigError("weights.values must have one entry per vertex");
      return SiteWeights(spec.values);
    case WeightsSpec::Kind::file: {
      SiteWeights w = read_site_weights_file(spec.path);
      if (w.size() != n) throw ConfigError("weights file must have one entry per vertex");
      return w;
    }
  }
  throw ConfigError("unreachable weights kind");
}

std::vector<double> build_initial(const InitialSpec& spec, std::size_t n, std::uint64_t seed) {
  switch (spec.kind) {
    case InitialSpec::Kind::dirac: {
      if (spec.vertex < 0 || static_cast<std::size_t>(spec.vertex) >= n)
        throw ConfigError("initial.vertex out of range");
      std::vector<double> eta(n, 0.0);
      eta[spec.vertex] = 1.0;
      return eta;
    }
    case InitialSpec::Kind::uniform_random: {
      CounterRng rng(seed, 0x1417u);
      const auto pt = random_simplex_point(n, rng);
      return {pt.values().begin(), pt.values().end()};
    }
    case InitialSpec::Kind::values: {
      if (spec.values.size() != n) throw ConfigError("initial.values must have one entry per vertex");
      const SimplexPoint pt(spec.values);
      return {pt.values().begin(), pt.values().end()};
    }
  }
  throw ConfigError("unreachable initial kind");
}

std::vector<double> resolve_time_grid(const TimeGridSpec& spec, double t_rel, std::size_t k) {
  std::vector<double> s = spec.values;
  if (s.empty()) {
    if (spec.points == 1) {
      s.push_back(spec.start);
    } else if (spec.spacing == TimeGridSpec::Spacing::linear) {
      for (std::size_t i = 0; i < spec.points; ++i)
        s.push_back(spec.start + (spec.stop - spec.start) * static_cast<double>(i) / (spec.points - 1.0));
    } else {
      if (!(spec.start > 0.0 && spec.stop > 0.0)) throw ConfigError("log-spaced grids need start, stop > 0");
      const double a = std::log(spec.start), b = std::log(spec.stop);
      for (std::size_t i = 0; i < spec.points; ++i)
        s.push_back(std::exp(a + (b - a) * static_cast<double>(i) / (spec.points - 1.0)));
    }
  }
  const double t_mix = 0.5 * t_rel * std::log(static_cast<double>(std::max<std::size_t>(k, 1)));
  std::vector<double> t;
  for (double v : s) {
    double x = v;
    if (spec.mode == TimeGridSpec::Mode::trel) x = v * t_rel;
    if (spec.mode == TimeGridSpec::Mode::tmix) x = t_mix + v * t_rel;
    // Grids centred on t_mix may reach below zero for small k.
    if (x < 0.0) continue;
    if (!t.empty() && !(x > t.back())) throw ConfigError("time grid must be strictly increasing");
    t.push_back(x);
  }
  if (t.empty()) throw ConfigError("time grid is empty after resolution");
  return t;
}

std::string to_string(Process p) {
  switch (p) {
    case Process::bin:
      return "bin";
    case Process::avg:
      return "avg";
    case Process::multicolored:
      return "multicolored";
  }
  return "?";
}

}  // namespace avgbin::harness
