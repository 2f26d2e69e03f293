#include "avgbin/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "avgbin/format.hpp"
#include "avgbin/harness/svg.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/spectral.hpp"
#include "avgbin/uniformization.hpp"
#include "avgbin/wilson.hpp"

namespace avgbin::harness {

namespace {

void log_line(const RunContext& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << msg << '\n';
}

std::string path_in(const RunContext& ctx, const std::string& name) {
  return (std::filesystem::path(ctx.out_dir) / name).string();
}

void emit_profile(const RunContext& ctx, const std::string& name, const std::vector<ProfileRecord>& rows) {
  if (ctx.out_dir.empty()) return;
  std::ostringstream s;
  write_profile_csv(s, rows, ctx.timestamp);
  write_file(path_in(ctx, name), s.str());
}

void emit_table(const RunContext& ctx, const std::string& name, const Table& table) {
  if (ctx.out_dir.empty()) return;
  std::ostringstream s;
  write_table_csv(s, table, ctx.timestamp);
  write_file(path_in(ctx, name), s.str());
}

void emit_svg(const RunContext& ctx, const std::string& name, const std::vector<double>& x,
              const std::vector<double>& y, const std::string& title, const std::string& x_label,
              const std::string& y_label) {
  if (ctx.out_dir.empty() || x.empty()) return;
  write_file(path_in(ctx, name), svg_line_chart(x, y, title, x_label, y_label));
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::optional<double> v) { return v ? format_double(*v) : std::string(); }

std::vector<GraphEntry> graph_entries(const ExperimentConfig& cfg) {
  return cfg.graphs.empty() ? std::vector<GraphEntry>{cfg.graph} : cfg.graphs;
}

// All k particles on x: mu_{k, delta_x} is the pile at x, so Wilson bounds
// from these starts bound the worst-pile profile from below.
std::vector<std::vector<double>> dirac_starts(std::size_t n) {
  std::vector<std::vector<double>> out;
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<double> e(n, 0.0);
    e[x] = 1.0;
    out.push_back(std::move(e));
  }
  return out;
}

double lp_deviation(std::span<const double> h, const SiteWeights& pi, double p) {
  double s = 0.0;
  for (std::size_t x = 0; x < h.size(); ++x) s += pi[x] * std::pow(std::abs(h[x] - 1.0), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

std::optional<double> crossing_time(const std::vector<ProfilePoint>& profile, double level) {
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].value > level) continue;
    if (i == 0) return profile[0].t;
    const auto& a = profile[i - 1];
    const auto& b = profile[i];
    const double w = (a.value - level) / (a.value - b.value);
    return a.t + w * (b.t - a.t);
  }
  return std::nullopt;
}

std::vector<GapRow> run_gap_sweep(const ExperimentConfig& cfg, const RunContext& ctx) {
  std::vector<GapRow> rows;
  for (const auto& entry : graph_entries(cfg)) {
    const WeightedGraph g = build_graph(entry);
    const SiteWeights pi = build_weights(cfg.weights, g.num_vertices());
    const double gap1 = spectrum_bin1(g, pi).gap;
    for (std::size_t k : cfg.k) {
      GapRow r;
      r.graph = g.name();
      r.n = g.num_vertices();
      r.k = k;
      r.states = count_configs(r.n, k);
      r.gap1 = gap1;
      if (r.states > kEnumerationCap) {
        r.skipped = true;
        r.note = "state space over the enumeration cap";
        log_line(ctx, "gap: skipping " + r.graph + " k=" + std::to_string(k) + " (" + std::to_string(r.states) +
                          " states)");
        rows.push_back(r);
        continue;
      }
      const UnlabeledSpace space(r.n, k);
      const Spectrum s = spectral_gap(generator_bin_unlabeled(g, pi, space), multinomial_measure(pi, space));
      r.gap = s.gap;
      r.rel_dev = std::abs(s.gap / gap1 - 1.0);
      r.flagged = r.rel_dev > 1e-8;
      if (!s.dense) r.note = "iterative eigensolve";
      if (r.flagged) log_line(ctx, "gap: FLAG " + r.graph + " k=" + std::to_string(k) + " rel_dev=" + fmt(r.rel_dev));
      rows.push_back(r);
    }
  }
  Table t{{"graph", "n", "k", "states", "gap", "gap1", "rel_dev", "flagged", "skipped", "note"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.graph, std::to_string(r.n), std::to_string(r.k), std::to_string(r.states), fmt(r.gap),
                      fmt(r.gap1), fmt(r.rel_dev), r.flagged ? "1" : "0", r.skipped ? "1" : "0", r.note});
  emit_table(ctx, "gap_sweep.csv", t);
  return rows;
}

CutoffResult run_cutoff_bin(const ExperimentConfig& cfg, const RunContext& ctx) {
  const WeightedGraph g = build_graph(cfg.graph);
  const std::size_t n = g.num_vertices();
  const SiteWeights pi = build_weights(cfg.weights, n);
  const Spectrum spec = spectrum_bin1(g, pi);
  const double t_rel = spec.t_rel;
  const bool bounds_feasible = n * n <= kTransientCap;
  const auto candidates = dirac_starts(n);
  CutoffResult res;

  for (std::size_t k : cfg.k) {
    const auto times = resolve_time_grid(cfg.time_grid, t_rel, k);
    const std::uint64_t states = count_configs(n, k);
    const bool exact = states <= cfg.exact_threshold;
    log_line(ctx, "cutoff: k=" + std::to_string(k) + " states=" + std::to_string(states) +
                      (exact ? " exact profile" : " bound-based profile"));
    std::vector<ProfilePoint> exact_profile;
    if (exact) {
      const BinModel model = make_bin_model(g, pi, k, std::max<std::size_t>(cfg.exact_threshold, 1));
      exact_profile = tv_profile_worst_pile(model, times, cfg.tolerance, cfg.max_starts).profile;
      for (const auto& p : exact_profile)
        res.records.push_back({cfg.id, k, p.t, p.t / t_rel, p.value, 0.0, ProfileKind::exact_tv});
    }
    if (bounds_feasible) {
      for (double t : times) {
        const double w2 = sup_w2_exact(g, pi, t, 1e-12, cfg.sup_random_points, cfg.seed).value;
        res.records.push_back({cfg.id, k, t, t / t_rel, tv_upper_bound_bin(k, w2), 0.0, ProfileKind::upper});
        double lower = 0.0;
        for (const auto& eta : candidates)
          lower = std::max(lower, wilson_report(g, pi, spec, k, eta, t, 1e-12).exact_bound);
        res.records.push_back({cfg.id, k, t, t / t_rel, lower, 0.0, ProfileKind::lower});
      }
    } else {
      log_line(ctx, "cutoff: n^2 over the transient cap, no bracket for k=" + std::to_string(k));
    }

    const double t_mix = 0.5 * t_rel * std::log(static_cast<double>(k));
    for (double c : cfg.time_grid.window_c) {
      CutoffAnnotation a;
      a.k = k;
      a.exact = exact;
      a.states = states;
      a.t_rel = t_rel;
      a.t_mix = t_mix;
      a.c = c;
      a.t_minus = t_mix - c * t_rel;
      a.t_plus = t_mix + c * t_rel;
      if (k > n * n) {
        const double lk = std::log(static_cast<double>(k));
        a.pre_a = 2.0 * std::log(static_cast<double>(k) / static_cast<double>(n)) / lk;
        a.pre_b = 2.0 * std::log(static_cast<double>(n)) / lk;
        a.pre_t_plus = *a.pre_a * t_mix + c * t_rel;
        a.pre_t_minus = *a.pre_b * t_mix - c * t_rel;
      }
      if (exact) a.t_half = crossing_time(exact_profile, 0.5);
      res.annotations.push_back(a);
    }
    if (exact) {
      std::vector<double> x, y;
      for (const auto& p : exact_profile) x.push_back(p.t / t_rel), y.push_back(p.value);
      emit_svg(ctx, "cutoff_k" + std::to_string(k) + ".svg", x, y,
               "worst-pile TV, " + g.name() + ", k=" + std::to_string(k), "t / t_rel", "d_k(t)");
    }
    res.exact_profiles.push_back(std::move(exact_profile));
  }

  emit_profile(ctx, "cutoff_profile.csv", res.records);
  Table t{{"experiment", "k", "mode", "states", "t_rel", "t_mix", "C", "t_minus", "t_plus", "pre_a", "pre_b",
           "pre_T_plus", "pre_T_minus", "t_half"},
          {}};
  for (const auto& a : res.annotations)
    t.rows.push_back({cfg.id, std::to_string(a.k), a.exact ? "exact" : "bound", std::to_string(a.states),
                      fmt(a.t_rel), fmt(a.t_mix), fmt(a.c), fmt(a.t_minus), fmt(a.t_plus), fmt(a.pre_a),
                      fmt(a.pre_b), fmt(a.pre_t_plus), fmt(a.pre_t_minus), fmt(a.t_half)});
  emit_table(ctx, "cutoff_annotations.csv", t);
  return res;
}

AvgProfileResult run_avg_profile(const ExperimentConfig& cfg, const RunContext& ctx) {
  if (cfg.replicas < 100) throw ConfigError("avg-profile needs at least 100 replicas");
  const WeightedGraph g = build_graph(cfg.graph);
  const std::size_t n = g.num_vertices();
  const SiteWeights pi = build_weights(cfg.weights, n);
  const double t_rel = relaxation_time(g, pi);
  const auto eta0_values = build_initial(cfg.initial, n, cfg.seed);
  const SimplexPoint eta0(eta0_values);
  AvgProfileResult res;

  for (std::size_t k : cfg.k) {
    const auto times = resolve_time_grid(cfg.time_grid, t_rel, k);
    const double sk = std::sqrt(static_cast<double>(k));
    log_line(ctx, "avg-profile: k=" + std::to_string(k) + ", " + std::to_string(times.size()) + " times, " +
                      std::to_string(cfg.replicas) + " replicas");
    const auto mc = wasserstein_profile(g, pi, eta0, times, cfg.p, cfg.replicas, cfg.seed, cfg.threads);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      const double lower = lp_deviation(h_eta(g, pi, eta0_values, t), pi, cfg.p);
      res.records.push_back({cfg.id, k, t, t / t_rel, mc[i].mean, mc[i].std_err, ProfileKind::wasserstein});
      res.records.push_back({cfg.id, k, t, t / t_rel, lower, 0.0, ProfileKind::lower});
      res.scaled_records.push_back(
          {cfg.id, k, t, t / t_rel, sk * mc[i].mean, sk * mc[i].std_err, ProfileKind::wasserstein});
      res.scaled_records.push_back({cfg.id, k, t, t / t_rel, sk * lower, 0.0, ProfileKind::lower});
    }
    const double t_mix = 0.5 * t_rel * std::log(static_cast<double>(k));
    std::vector<double> cs = cfg.time_grid.window_c;
    std::sort(cs.begin(), cs.end());
    std::vector<double> t_plus;
    for (double c : cs) t_plus.push_back(t_mix + c * t_rel);
    if (!cs.empty()) {
      const auto win = wasserstein_profile(g, pi, eta0, t_plus, cfg.p, cfg.replicas, cfg.seed, cfg.threads);
      for (std::size_t i = 0; i < cs.size(); ++i)
        res.window.push_back({k, cs[i], t_plus[i], sk * win[i].mean, sk * win[i].std_err});
    }
    std::vector<double> x, y;
    for (std::size_t i = 0; i < times.size(); ++i) x.push_back(times[i] / t_rel), y.push_back(mc[i].mean);
    emit_svg(ctx, "avg_profile_k" + std::to_string(k) + ".svg", x, y, "Averaging L^p profile, " + g.name(),
             "t / t_rel", "E|eta_t/pi - 1|_p");
  }
  emit_profile(ctx, "avg_profile.csv", res.records);
  emit_profile(ctx, "avg_profile_scaled.csv", res.scaled_records);
  Table t{{"experiment", "k", "C", "t_plus", "scaled_mean", "scaled_stderr"}, {}};
  for (const auto& w : res.window)
    t.rows.push_back({cfg.id, std::to_string(w.k), fmt(w.c), fmt(w.t_plus), fmt(w.scaled_mean), fmt(w.scaled_std_err)});
  emit_table(ctx, "avg_window.csv", t);
  return res;
}

CdszResult run_complete_cdsz(const ExperimentConfig& cfg, const RunContext& ctx) {
  if (cfg.graph.spec.kind != GraphKind::complete) throw ConfigError("cdsz needs a complete graph");
  if (cfg.graph.spec.n < 64) throw ConfigError("cdsz needs n >= 64");
  const WeightedGraph g = build_graph(cfg.graph);
  const std::size_t n = g.num_vertices();
  const SiteWeights pi = build_weights(cfg.weights, n);
  CdszResult res;
  res.n = n;
  res.t_cdsz = std::log(static_cast<double>(n)) / (static_cast<double>(n) * std::numbers::ln2);
  if (cfg.time_grid.mode == TimeGridSpec::Mode::tmix) throw ConfigError("cdsz grids are absolute or in t_CDSZ units");
  const auto times = resolve_time_grid(cfg.time_grid, res.t_cdsz, 1);

  const std::size_t starts = std::min(n, std::max<std::size_t>(cfg.max_starts, 1));
  std::vector<McEstimate> best(times.size(), McEstimate{-1.0, 0.0});
  for (std::size_t s = 0; s < starts; ++s) {
    const auto x = static_cast<Vertex>(s * n / starts);
    log_line(ctx, "cdsz: Dirac start at vertex " + std::to_string(x));
    const auto prof = wasserstein_profile(g, pi, SimplexPoint::dirac(n, x), times, 1.0, cfg.replicas, cfg.seed + s,
                                          cfg.threads);
    for (std::size_t i = 0; i < times.size(); ++i)
      if (prof[i].mean > best[i].mean) best[i] = prof[i];
  }
  std::vector<ProfilePoint> profile;
  for (std::size_t i = 0; i < times.size(); ++i) {
    profile.push_back({times[i], best[i].mean});
    res.records.push_back(
        {cfg.id, 1, times[i], times[i] / res.t_cdsz, best[i].mean, best[i].std_err, ProfileKind::wasserstein});
  }
  res.crossing = crossing_time(profile, 1.0);
  res.ratio = res.crossing ? *res.crossing / res.t_cdsz : std::numeric_limits<double>::quiet_NaN();
  emit_profile(ctx, "cdsz_profile.csv", res.records);
  Table t{{"experiment", "n", "t_cdsz", "crossing_time", "ratio", "replicas", "starts"}, {}};
  t.rows.push_back({cfg.id, std::to_string(n), fmt(res.t_cdsz), fmt(res.crossing), fmt(res.ratio),
                    std::to_string(cfg.replicas), std::to_string(starts)});
  emit_table(ctx, "cdsz_summary.csv", t);
  std::vector<double> x, y;
  for (const auto& p : profile) x.push_back(p.t / res.t_cdsz), y.push_back(p.value);
  emit_svg(ctx, "cdsz_profile.svg", x, y, "complete(" + std::to_string(n) + ") L^1 profile", "t / t_CDSZ",
           "E|eta_t/pi - 1|_1");
  return res;
}

std::vector<NashRow> run_nash(const ExperimentConfig& cfg, const RunContext& ctx) {
  std::vector<NashRow> rows;
  for (const auto& entry : graph_entries(cfg)) {
    const WeightedGraph g = build_graph(entry);
    const SiteWeights pi = build_weights(cfg.weights, g.num_vertices());
    const double t_rel = relaxation_time(g, pi);
    NashRow row;
    row.graph = g.name();
    row.times = resolve_time_grid(entry.time_grid.value_or(cfg.time_grid), t_rel, 1);
    row.max_h = max_heat_kernel_profile(g, pi, row.times);
    try {
      row.fit = nash_fit(g, pi, row.times);
    } catch (const NashFitError& e) {
      row.fit.t_rel = t_rel;
      row.fit.d_hat = std::numeric_limits<double>::quiet_NaN();
      row.fit.finite_dimensional = false;
      row.fit.reason = e.what();
    }
    log_line(ctx, "nash: " + row.graph + " d_hat=" + fmt(row.fit.d_hat) + " R2=" + fmt(row.fit.r_squared) +
                      (row.fit.finite_dimensional ? "" : " flagged: " + row.fit.reason));
    rows.push_back(std::move(row));
  }
  Table t{{"graph", "t_rel", "d_hat", "t_nash_hat", "t_lo", "t_hi", "r_squared", "points", "finite_dimensional",
           "reason"},
          {}};
  Table prof{{"graph", "t", "t_over_trel", "max_h"}, {}};
  for (const auto& r : rows) {
    std::string reason = r.fit.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    t.rows.push_back({r.graph, fmt(r.fit.t_rel), fmt(r.fit.d_hat), fmt(r.fit.t_nash_hat), fmt(r.fit.t_lo),
                      fmt(r.fit.t_hi), fmt(r.fit.r_squared), std::to_string(r.fit.points),
                      r.fit.finite_dimensional ? "1" : "0", reason});
    for (std::size_t i = 0; i < r.times.size(); ++i)
      prof.rows.push_back({r.graph, fmt(r.times[i]), fmt(r.times[i] / r.fit.t_rel), fmt(r.max_h[i])});
  }
  emit_table(ctx, "nash.csv", t);
  emit_table(ctx, "nash_profile.csv", prof);
  return rows;
}

}  // namespace avgbin::harness
