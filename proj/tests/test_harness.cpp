#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "avgbin/harness/config.hpp"
#include "avgbin/harness/experiments.hpp"
#include "avgbin/harness/profile_csv.hpp"
#include "avgbin/harness/svg.hpp"
#include "avgbin/harness/verify.hpp"

using namespace avgbin;
using namespace avgbin::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("avgbin_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

const char* kSmall = R"(
id: small
graph: {kind: cycle, n: 3}
k: [2, 3]
time_grid: {mode: trel, start: 0, stop: 3, points: 7, window_c: [1, 2]}
sup_random_points: 5
replicas: 200
seed: 4
)";

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(
id: demo
graph:
  kind: torus
  dims: [4, 4]
  conductance: {random: [0.5, 2.0], seed: 3}
weights: {kind: elliptic, ratio: 3.0, seed: 9}
process: avg
k: [1, 4]
time_grid: {mode: tmix, spacing: linear, start: -2, stop: 2, points: 5}
replicas: 300
p: 1
threads: 2
initial: {kind: dirac, vertex: 5}
)");
  CHECK(cfg.id == "demo");
  CHECK(cfg.graph.spec.kind == GraphKind::torus);
  REQUIRE(cfg.graph.random_conductance);
  CHECK(cfg.graph.random_conductance->hi == 2.0);
  CHECK(cfg.weights.kind == WeightsSpec::Kind::elliptic);
  CHECK(cfg.process == Process::avg);
  CHECK(cfg.k == std::vector<std::size_t>{1, 4});
  CHECK(cfg.replicas == 300);
  CHECK(cfg.p == 1.0);
  CHECK(cfg.initial.vertex == 5);
  const auto g = build_graph(cfg.graph);
  CHECK(g.num_vertices() == 16);
  CHECK(build_weights(cfg.weights, 16).size() == 16);
  CHECK(build_initial(cfg.initial, 16, 0)[5] == 1.0);
  CHECK_THROWS_AS(parse_config("graph: {kind: cycle, n: 3, colour: red}"), ConfigError);
  CHECK_THROWS_AS(parse_config("replica: 3"), ConfigError);
  CHECK_THROWS_AS(parse_config("process: exclusion"), ConfigError);
}

TEST_CASE("time grid resolution") {
  TimeGridSpec s;
  s.mode = TimeGridSpec::Mode::trel;
  s.start = 0.0;
  s.stop = 2.0;
  s.points = 3;
  CHECK(resolve_time_grid(s, 1.5, 1) == std::vector<double>{0.0, 1.5, 3.0});
  s.mode = TimeGridSpec::Mode::tmix;
  s.start = -2.0;
  // t_mix = 0.5 log 4 = log 2 < 2 * 1: the first point is dropped.
  const auto t = resolve_time_grid(s, 1.0, 4);
  CHECK(t.size() == 2);
  CHECK(t[0] == doctest::Approx(std::log(2.0)));
  s.mode = TimeGridSpec::Mode::absolute;
  s.spacing = TimeGridSpec::Spacing::log;
  s.start = 0.1;
  s.stop = 10.0;
  const auto lg = resolve_time_grid(s, 1.0, 1);
  CHECK(lg[1] == doctest::Approx(1.0));
  s.values = {1.0, 1.0};
  CHECK_THROWS_AS(resolve_time_grid(s, 1.0, 1), ConfigError);
}

TEST_CASE("profile CSV round trip") {
  std::vector<ProfileRecord> rows{{"a", 4, 0.1, 0.1 / 3.0, 1.0 / 3.0, 1e-17, ProfileKind::exact_tv},
                                  {"a", 8, 2.5, 0.75, 0.123456789012345678, 0.0, ProfileKind::upper},
                                  {"b", 1, 1e-300, 7.0, 2.0, 0.5, ProfileKind::lower},
                                  {"b", 1, 3.0, 7.0, 2.0, 0.5, ProfileKind::wasserstein}};
  std::stringstream s;
  write_profile_csv(s, rows);
  CHECK(s.str().rfind("# generated ", 0) == 0);
  CHECK(read_profile_csv(s) == rows);
  Table t{{"x", "y"}, {{"1", "a"}, {"2", ""}}};
  std::stringstream ts;
  write_table_csv(ts, t, false);
  const auto back = read_table_csv(ts);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
}

TEST_CASE("crossing times") {
  const std::vector<ProfilePoint> p{{0.0, 1.0}, {1.0, 0.8}, {2.0, 0.4}, {3.0, 0.1}};
  CHECK(*crossing_time(p, 0.5) == doctest::Approx(1.75));
  CHECK(*crossing_time(p, 1.0) == 0.0);
  CHECK_FALSE(crossing_time(p, 0.05));
}

TEST_CASE("experiments are byte-identical across runs and thread counts") {
  auto cfg = parse_config(kSmall);
  for (const char* name : {"gap", "cutoff", "avg"}) {
    const auto a = scratch(std::string(name) + "_a"), b = scratch(std::string(name) + "_b");
    auto cfg_b = cfg;
    cfg_b.threads = 1;
    for (const auto& [dir, c] : {std::pair{a, cfg}, std::pair{b, cfg_b}}) {
      const RunContext ctx{dir.string(), false, nullptr};
      if (std::string(name) == "gap") run_gap_sweep(c, ctx);
      if (std::string(name) == "cutoff") run_cutoff_bin(c, ctx);
      if (std::string(name) == "avg") run_avg_profile(c, ctx);
    }
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
      ++files;
      CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    CHECK(files > 0);
  }
}

TEST_CASE("emitted CSV files re-parse") {
  const auto dir = scratch("reparse");
  const auto cfg = parse_config(kSmall);
  const auto res = run_cutoff_bin(cfg, RunContext{dir.string(), true, nullptr});
  std::ifstream in(dir / "cutoff_profile.csv");
  CHECK(read_profile_csv(in) == res.records);
  std::ifstream ann(dir / "cutoff_annotations.csv");
  CHECK(read_table_csv(ann).rows.size() == res.annotations.size());
}

TEST_CASE("cutoff annotations and bracket") {
  auto cfg = parse_config(kSmall);
  cfg.k = {2, 12};
  const auto res = run_cutoff_bin(cfg, RunContext{});
  const double t_rel = 1.0 / 1.5;  // cycle(3): gap 1 - cos(2 pi / 3)
  for (const auto& a : res.annotations) {
    CHECK(a.t_rel == doctest::Approx(t_rel));
    CHECK(a.t_mix == doctest::Approx(0.5 * t_rel * std::log(static_cast<double>(a.k))));
    CHECK(a.t_plus - a.t_minus == doctest::Approx(2.0 * a.c * t_rel));
    // Pre-cutoff exponents only for k > n^2 = 9.
    CHECK(a.pre_a.has_value() == (a.k == 12));
    if (a.pre_a) {
      CHECK(*a.pre_a == doctest::Approx(2.0 * std::log(4.0) / std::log(12.0)));
      CHECK(*a.pre_b == doctest::Approx(2.0 * std::log(3.0) / std::log(12.0)));
      CHECK(*a.pre_t_plus == doctest::Approx(*a.pre_a * a.t_mix + a.c * t_rel));
      CHECK(*a.pre_t_minus == doctest::Approx(*a.pre_b * a.t_mix - a.c * t_rel));
    }
  }
  // The exact profile sits inside the bracket from t_rel on.
  for (const auto& e : res.records) {
    if (e.kind != ProfileKind::exact_tv || e.t < t_rel) continue;
    for (const auto& b : res.records) {
      if (b.k != e.k || b.t != e.t) continue;
      if (b.kind == ProfileKind::upper) CHECK(e.value <= b.value + 1e-9);
      if (b.kind == ProfileKind::lower) CHECK(e.value >= b.value - 1e-9);
    }
  }
}

TEST_CASE("experiment preconditions") {
  auto cfg = parse_config(kSmall);
  cfg.replicas = 50;
  CHECK_THROWS_AS(run_avg_profile(cfg, RunContext{}), ConfigError);
  CHECK_THROWS_AS(run_complete_cdsz(cfg, RunContext{}), ConfigError);
  cfg.graph.spec.kind = GraphKind::complete;
  cfg.graph.spec.n = 32;
  CHECK_THROWS_AS(run_complete_cdsz(cfg, RunContext{}), ConfigError);
}

TEST_CASE("verify battery reports every check and catches a broken update") {
  const auto dir = scratch("verify");
  const auto report = run_verify(ExperimentConfig{}, RunContext{dir.string(), false, nullptr});
  CHECK(report.results.size() == verify_battery().size());
  CHECK(report.all_pass());
  std::ifstream in(dir / "verify.jsonl");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) lines += line.empty() ? 0 : 1;
  CHECK(lines == report.results.size());

  const EdgeUpdateFn broken = [](const SimplexPoint& eta, Vertex x, Vertex y, const SiteWeights& w) {
    std::vector<double> v(eta.values().begin(), eta.values().end());
    const double m = v[x] + v[y];
    v[x] = m * w[y] / (w[x] + w[y]);
    v[y] = m - v[x];
    return SimplexPoint(v);
  };
  const auto bad = run_verify(ExperimentConfig{}, RunContext{}, broken);
  CHECK_FALSE(bad.all_pass());
  CHECK(bad.results.front().name == "intertwining");
  CHECK(bad.results.front().residual > 1e-3);
}

TEST_CASE("failing checks never throw out of the runner") {
  const Check boom{"boom", 1.0, []() -> CheckOutcome { throw std::runtime_error("bad input"); }};
  const auto r = run_check(boom);
  CHECK_FALSE(r.pass);
  CHECK(r.detail.find("bad input") != std::string::npos);
  CHECK(to_json_line(r).find("\"residual\":null") != std::string::npos);
}

TEST_CASE("svg output") {
  const std::vector<double> x{0, 1, 2}, y{1, 0.5, 0.1};
  const auto svg = svg_line_chart(x, y, "title & more", "t", "d");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("title &amp; more") != std::string::npos);
}
