#include "avgbin/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "avgbin/dirichlet.hpp"
#include "avgbin/distance.hpp"
#include "avgbin/duality.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/simulator.hpp"
#include "avgbin/spectral.hpp"

namespace avgbin::harness {

namespace {

struct Instance {
  WeightedGraph g;
  SiteWeights pi;
};

Instance rc_cycle(std::size_t n, std::uint64_t seed) {
  return {random_conductances(cycle_graph(n), 0.5, 2.0, seed), random_elliptic_weights(n, 2.0, seed + 1)};
}

Instance plain(WeightedGraph g) {
  const std::size_t n = g.num_vertices();
  return {std::move(g), uniform_weights(n)};
}

std::string label(const Instance& in) { return in.g.name() + "/n=" + std::to_string(in.g.num_vertices()); }

std::vector<double> random_values(std::size_t count, CounterRng& rng) {
  std::vector<double> v(count);
  for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

// Tracks the largest residual and where it occurred.
struct Worst {
  double value = 0.0;
  std::string where;
  void update(double r, const std::string& at) {
    if (std::isnan(r) || r > value) {
      value = r;
      where = at;
    }
  }
  CheckOutcome outcome() const { return {value, where.empty() ? "" : "max at " + where}; }
};

CheckOutcome check_intertwining(const VerifyOptions& o) {
  CounterRng rng(o.seed, 0x101);
  Worst w;
  const std::vector<Instance> graphs{plain(path_graph(2)), rc_cycle(3, o.seed), rc_cycle(4, o.seed + 7)};
  for (const auto& in : graphs)
    for (std::size_t k = 1; k <= 3; ++k) {
      const UnlabeledSpace space(in.g.num_vertices(), k);
      for (int rep = 0; rep < 100; ++rep) {
        const auto f = random_values(space.size(), rng);
        const auto eta = random_simplex_point(in.g.num_vertices(), rng);
        w.update(intertwining_residual(in.g, in.pi, space, f, eta, o.update), label(in) + " k=" + std::to_string(k));
      }
    }
  return w.outcome();
}

CheckOutcome check_generator_duality(const VerifyOptions& o, bool orthogonal) {
  CounterRng rng(o.seed, orthogonal ? 0x103 : 0x102);
  Worst w;
  const std::vector<Instance> graphs{plain(path_graph(3)), plain(complete_graph(4)), rc_cycle(4, o.seed + 11)};
  for (const auto& in : graphs) {
    const std::size_t n = in.g.num_vertices();
    for (std::size_t k = 1; k <= 3; ++k) {
      std::vector<Vertex> xs(k);
      for (int rep = 0; rep < 200; ++rep) {
        for (auto& x : xs) x = static_cast<Vertex>(std::min<std::size_t>(n - 1, static_cast<std::size_t>(rng.uniform() * n)));
        const auto eta = random_simplex_point(n, rng);
        w.update(duality_generator_residual(in.g, in.pi, xs, eta, orthogonal, o.update),
                 label(in) + " k=" + std::to_string(k));
      }
    }
  }
  return w.outcome();
}

CheckOutcome check_selfduality() {
  Worst w;
  const WeightedGraph g = cycle_graph(3);
  const SiteWeights pi = uniform_weights(3);
  for (std::size_t k : {1, 2})
    for (std::size_t l : {2, 3})
      for (double t : {0.3, 1.0, 3.0})
        w.update(selfduality_residual(g, pi, k, l, t, 1e-9),
                 "k=" + std::to_string(k) + " l=" + std::to_string(l) + " t=" + std::to_string(t));
  return w.outcome();
}

CheckOutcome check_jk_intertwining(const VerifyOptions& o) {
  Worst w;
  const Instance in = rc_cycle(3, o.seed + 13);
  for (std::size_t k : {2, 3}) {
    const UnlabeledSpace from(3, k - 1), to(3, k);
    const Eigen::MatrixXd j = jk_matrix(from, to);
    const Eigen::MatrixXd lk = generator_bin_unlabeled(in.g, in.pi, to).to_dense();
    const Eigen::MatrixXd lk1 = generator_bin_unlabeled(in.g, in.pi, from).to_dense();
    w.update((lk * j - j * lk1).cwiseAbs().maxCoeff(), "k=" + std::to_string(k));
  }
  return w.outcome();
}

CheckOutcome check_jk_rank() {
  double deficit = 0.0;
  std::string detail;
  for (std::size_t n : {2, 3, 4})
    for (std::size_t k : {2, 3, 4}) {
      const UnlabeledSpace from(n, k - 1), to(n, k);
      const Eigen::MatrixXd j = jk_matrix(from, to);
      const auto rank = Eigen::FullPivLU<Eigen::MatrixXd>(j).rank();
      const double d = static_cast<double>(j.cols() - rank);
      if (d > deficit) {
        deficit = d;
        detail = "rank deficit at n=" + std::to_string(n) + " k=" + std::to_string(k);
      }
    }
  return {deficit, detail};
}

CheckOutcome check_adjointness(const VerifyOptions& o) {
  CounterRng rng(o.seed, 0x105);
  Worst w;
  const SiteWeights pi = random_elliptic_weights(3, 2.0, o.seed + 17);
  for (std::size_t k : {2, 3})
    for (std::size_t i = 0; i < k; ++i)
      for (int rep = 0; rep < 20; ++rep) {
        const TensorFunction psi(3, k - 1, random_values(count_tuples(3, k - 1), rng));
        const TensorFunction phi(3, k, random_values(count_tuples(3, k), rng));
        const double lhs = inner_product(annihilate(psi, i), phi, pi);
        const double rhs = inner_product(psi, create(phi, i, pi), pi);
        w.update(std::abs(lhs - rhs), "k=" + std::to_string(k) + " i=" + std::to_string(i));
      }
  return w.outcome();
}

// Gap eigenfunctions of the labeled two-particle chain on three sites.
struct LabeledGap {
  Instance in;
  Spectrum spec;
};

std::vector<LabeledGap> labeled_gap_instances(std::uint64_t seed) {
  std::vector<LabeledGap> out;
  for (auto in : {plain(cycle_graph(3)), Instance{path_graph(3), random_elliptic_weights(3, 2.0, seed + 19)}}) {
    const auto mu = product_measure(in.pi.values(), 2);
    Spectrum spec = spectral_gap(generator_bin_labeled(in.g, in.pi, 2), mu);
    out.push_back({std::move(in), std::move(spec)});
  }
  return out;
}

CheckOutcome check_fpsi_eigen(const VerifyOptions& o) {
  CounterRng rng(o.seed, 0x106);
  Worst w;
  for (const auto& inst : labeled_gap_instances(o.seed)) {
    const double lambda = inst.spec.gap;
    for (std::size_t b = 0; b < inst.spec.gap_eigenspace.size(); ++b) {
      const TensorFunction psi(3, 2, inst.spec.gap_eigenspace[b]);
      const SimplexFunction f = [&](const SimplexPoint& e) { return f_psi_eval(psi, e.values(), inst.in.pi); };
      for (int rep = 0; rep < 50; ++rep) {
        const auto eta = random_simplex_point(3, rng);
        const double lhs = avg_generator_apply(f, eta, inst.in.g, inst.in.pi, o.update);
        w.update(std::abs(lhs + lambda * f(eta)), label(inst.in) + " basis " + std::to_string(b));
      }
    }
  }
  return w.outcome();
}

CheckOutcome check_kernel_criterion(const VerifyOptions& o) {
  CounterRng rng(o.seed, 0x107);
  Worst w;
  for (const auto& inst : labeled_gap_instances(o.seed)) {
    // psi(x) (x) 1 and 1 (x) psi(x) are gap eigenfunctions of the labeled
    // chain lying in the image of an annihilation operator.
    const Spectrum one = spectrum_bin1(inst.in.g, inst.in.pi);
    for (const auto& phi1 : one.gap_eigenspace)
      for (std::size_t i = 0; i < 2; ++i) {
        const TensorFunction psi = annihilate(TensorFunction(3, 1, phi1), i);
        for (int rep = 0; rep < 50; ++rep) {
          const auto eta = random_simplex_point(3, rng);
          w.update(std::abs(f_psi_eval(psi, eta.values(), inst.in.pi)), label(inst.in) + " slot " + std::to_string(i));
        }
      }
  }
  return w.outcome();
}

std::vector<Instance> dirichlet_graphs(std::uint64_t seed) {
  std::vector<Instance> out{plain(path_graph(4)), plain(cycle_graph(5)), plain(complete_graph(4)),
                            rc_cycle(5, seed + 23)};
  WeightedGraph gasket = sierpinski_gasket(1);
  const std::size_t n = gasket.num_vertices();
  out.push_back({std::move(gasket), random_elliptic_weights(n, 3.0, seed + 29)});
  return out;
}

struct DirichletSweep {
  double ordering = 0.0;
  double identity = 0.0;
  std::string ordering_at, identity_at;
};

DirichletSweep dirichlet_sweep(std::uint64_t seed) {
  CounterRng rng(seed, 0x108);
  DirichletSweep s;
  for (const auto& in : dirichlet_graphs(seed)) {
    const std::size_t n = in.g.num_vertices();
    const RateMatrix bin2 = generator_bin_labeled(in.g, in.pi, 2);
    const RateMatrix indep = generator_product2(in.g, in.pi);
    const auto mu = product_measure(in.pi.values(), 2);
    for (int rep = 0; rep < 1000; ++rep) {
      const auto psi = random_values(n * n, rng);
      const double e_bin = dirichlet_form(bin2, mu, psi);
      const double e_ind = dirichlet_form(indep, mu, psi);
      const double f = f_bin2_form(in.g, in.pi, psi);
      const double viol = std::max({0.0, 0.5 * e_ind - e_bin, e_bin - e_ind});
      if (viol > s.ordering) s.ordering = viol, s.ordering_at = label(in);
      const double id = std::abs(e_bin - (e_ind - f));
      if (id > s.identity) s.identity = id, s.identity_at = label(in);
    }
  }
  return s;
}

std::vector<Instance> gap_graphs(std::uint64_t seed) {
  return {plain(path_graph(4)), plain(cycle_graph(5)), plain(complete_graph(4)), rc_cycle(5, seed + 31)};
}

CheckOutcome check_gap_identity(const VerifyOptions& o) {
  Worst w;
  for (const auto& in : gap_graphs(o.seed)) {
    const double gap1 = spectrum_bin1(in.g, in.pi).gap;
    for (std::size_t k = 1; k <= 4; ++k) {
      const UnlabeledSpace space(in.g.num_vertices(), k);
      const double gap = spectral_gap(generator_bin_unlabeled(in.g, in.pi, space), multinomial_measure(in.pi, space)).gap;
      w.update(std::abs(gap - gap1) / gap1, label(in) + " k=" + std::to_string(k));
    }
  }
  return w.outcome();
}

CheckOutcome check_al_drop(const VerifyOptions& o) {
  CounterRng rng(o.seed, 0x109);
  Worst w;
  const Instance in = rc_cycle(5, o.seed + 37);
  for (int rep = 0; rep < 10000; ++rep) {
    const auto eta = random_simplex_point(5, rng);
    const std::size_t id = std::min(in.g.num_edges() - 1, static_cast<std::size_t>(rng.uniform() * in.g.num_edges()));
    const Edge& e = in.g.edge(id);
    w.update(std::abs(l2_drop(eta, e.x, e.y, in.pi) - l2_drop_closed_form(eta, e.x, e.y, in.pi)),
             "edge " + std::to_string(id));
  }
  return w.outcome();
}

CheckOutcome check_al_decay(const VerifyOptions& o) {
  CounterRng rng(o.seed, 0x10a);
  Worst w;
  const std::vector<Instance> graphs{plain(path_graph(4)), rc_cycle(5, o.seed + 41), plain(complete_graph(4))};
  for (const auto& in : graphs) {
    const std::size_t n = in.g.num_vertices();
    const double t_rel = relaxation_time(in.g, in.pi);
    std::vector<std::vector<double>> etas(1, std::vector<double>(n, 0.0));
    etas[0][0] = 1.0;
    for (int rep = 0; rep < 3; ++rep) {
      const auto p = random_simplex_point(n, rng);
      etas.emplace_back(p.values().begin(), p.values().end());
    }
    for (const auto& eta : etas) {
      const double d0 = l2_distance_sq(eta, in.pi);
      for (double s : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double t = s * t_rel;
        const double lhs = nt_decomposition(in.g, in.pi, eta, t).exact_total;
        w.update(std::max(0.0, lhs - std::exp(-t / t_rel) * d0), label(in) + " t/t_rel=" + std::to_string(s));
      }
    }
  }
  return w.outcome();
}

struct MultinomialSweep {
  double bound_violation = 0.0;
  double chi2_rel = 0.0;
  std::string violation_at, chi2_at;
};

MultinomialSweep multinomial_sweep(std::uint64_t seed) {
  CounterRng rng(seed, 0x10b);
  MultinomialSweep s;
  for (std::size_t n : {2, 3}) {
    const SiteWeights pi = n == 2 ? uniform_weights(2) : random_elliptic_weights(3, 2.0, seed + 43);
    for (std::size_t k = 1; k <= 6; ++k)
      for (int rep = 0; rep < 50; ++rep) {
        const auto eta = random_simplex_point(n, rng);
        const std::string at = "n=" + std::to_string(n) + " k=" + std::to_string(k);
        const double viol =
            std::max(0.0, tv_multinomial_exact(eta.values(), pi, k) - tv_bound_multinomial(eta.values(), pi, k));
        if (viol > s.bound_violation) s.bound_violation = viol, s.violation_at = at;
        const double closed = chi2_multinomial(eta.values(), pi, k);
        const double enumerated = chi2_multinomial_enumerated(eta.values(), pi, k);
        const double rel = std::abs(closed - enumerated) / std::max(1.0, std::abs(enumerated));
        if (rel > s.chi2_rel) s.chi2_rel = rel, s.chi2_at = at;
      }
  }
  return s;
}

CheckOutcome check_nt_consistency(const VerifyOptions& o) {
  CounterRng rng(o.seed, 0x10c);
  Worst w;
  const std::vector<Instance> graphs{plain(cycle_graph(4)), rc_cycle(4, o.seed + 47)};
  for (const auto& in : graphs) {
    const std::size_t n = in.g.num_vertices();
    for (double t : {0.0, 0.5, 2.0}) {
      const auto m = w2_quadratic_form(in.g, in.pi, t);
      for (int rep = 0; rep < 5; ++rep) {
        const auto eta = random_simplex_point(n, rng);
        const auto nt = nt_decomposition(in.g, in.pi, eta.values(), t);
        const std::string at = label(in) + " t=" + std::to_string(t);
        w.update(std::abs(nt.h_term + nt.nt_term - nt.exact_total), at + " (split)");
        w.update(std::abs(nt.exact_total - w2_exact(m, eta.values())), at + " (quadratic form)");
      }
    }
  }
  return w.outcome();
}

CheckOutcome check_multicolored_projection(const VerifyOptions& o) {
  const Instance in = rc_cycle(3, o.seed + 53);
  const ParticleConfig xi0{0, 2, 1};
  double mismatches = 0.0;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    SimOptions opts;
    opts.t_end = 2.0;
    opts.record_times = {0.5, 1.0, 2.0};
    opts.seed = o.seed;
    opts.replica_id = r;
    opts.mode = CouplingMode::per_particle_bernoulli;
    const auto plain_run = simulate_bin(in.g, in.pi, xi0, opts);
    const auto colored = simulate_multicolored(in.g, in.pi, xi0, opts);
    bool same = plain_run.size() == colored.size();
    for (std::size_t i = 0; same && i < colored.size(); ++i) same = colored[i].color_sum() == plain_run[i];
    if (!same) mismatches += 1.0;
  }
  return {mismatches, "mismatched trajectories out of 1000"};
}

CheckOutcome check_multicolored_intertwining(const VerifyOptions& o) {
  CounterRng rng(o.seed, 0x10d);
  Worst w;
  const Instance in = rc_cycle(3, o.seed + 59);
  for (std::size_t total = 1; total <= 3; ++total) {
    const UnlabeledSpace configs(3, total);
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const auto xi = configs.config(c);
      std::vector<std::vector<double>> color_f(3);
      std::vector<SimplexPoint> color_eta;
      for (std::size_t z = 0; z < 3; ++z) {
        if (xi[z] > 0) color_f[z] = random_values(count_configs(3, xi[z]), rng);
        color_eta.push_back(random_simplex_point(3, rng));
      }
      for (std::size_t e = 0; e < in.g.num_edges(); ++e)
        w.update(multicolor_intertwining_residual(in.g, in.pi, xi, color_f, color_eta, e),
                 "xi=(" + std::to_string(xi[0]) + "," + std::to_string(xi[1]) + "," + std::to_string(xi[2]) + ")");
    }
  }
  return w.outcome();
}

}  // namespace

std::vector<Check> verify_battery(const VerifyOptions& opts) {
  const VerifyOptions o = opts;
  auto dirichlet = std::make_shared<std::optional<DirichletSweep>>();
  auto dirichlet_once = [dirichlet, seed = o.seed]() -> const DirichletSweep& {
    if (!*dirichlet) *dirichlet = dirichlet_sweep(seed);
    return **dirichlet;
  };
  auto multinomial = std::make_shared<std::optional<MultinomialSweep>>();
  auto multinomial_once = [multinomial, seed = o.seed]() -> const MultinomialSweep& {
    if (!*multinomial) *multinomial = multinomial_sweep(seed);
    return **multinomial;
  };
  return {
      {"intertwining", 1e-12, [o] { return check_intertwining(o); }},
      {"moment_duality_generator", 1e-10, [o] { return check_generator_duality(o, false); }},
      {"orthogonal_duality_generator", 1e-10, [o] { return check_generator_duality(o, true); }},
      {"self_duality", 1e-7, [] { return check_selfduality(); }},
      {"jk_intertwining", 1e-11, [o] { return check_jk_intertwining(o); }},
      {"jk_injective", 0.0, [] { return check_jk_rank(); }},
      {"annihilate_create_adjoint", 1e-12, [o] { return check_adjointness(o); }},
      {"fpsi_eigen_relation", 1e-9, [o] { return check_fpsi_eigen(o); }},
      {"fpsi_kernel_criterion", 1e-9, [o] { return check_kernel_criterion(o); }},
      {"dirichlet_ordering", 1e-12,
       [dirichlet_once] {
         const auto& s = dirichlet_once();
         return CheckOutcome{s.ordering, s.ordering_at.empty() ? "" : "max at " + s.ordering_at};
       }},
      {"dirichlet_identity", 1e-10,
       [dirichlet_once] {
         const auto& s = dirichlet_once();
         return CheckOutcome{s.identity, s.identity_at.empty() ? "" : "max at " + s.identity_at};
       }},
      {"gap_identity", 1e-9, [o] { return check_gap_identity(o); }},
      {"aldous_lanoue_drop", 1e-12, [o] { return check_al_drop(o); }},
      {"aldous_lanoue_decay", 1e-9, [o] { return check_al_decay(o); }},
      {"multinomial_tv_bound", 1e-12,
       [multinomial_once] {
         const auto& s = multinomial_once();
         return CheckOutcome{s.bound_violation, s.violation_at.empty() ? "" : "max at " + s.violation_at};
       }},
      {"multinomial_chi2", 1e-10,
       [multinomial_once] {
         const auto& s = multinomial_once();
         return CheckOutcome{s.chi2_rel, s.chi2_at.empty() ? "" : "max relative error at " + s.chi2_at};
       }},
      {"nt_decomposition", 1e-9, [o] { return check_nt_consistency(o); }},
      {"multicolored_projection", 0.0, [o] { return check_multicolored_projection(o); }},
      {"multicolored_intertwining", 1e-11, [o] { return check_multicolored_intertwining(o); }},
  };
}

CheckResult run_check(const Check& check) {
  CheckResult r;
  r.name = check.name;
  r.tolerance = check.tolerance;
  try {
    const CheckOutcome out = check.run();
    r.residual = out.residual;
    r.detail = out.detail;
    r.pass = out.residual <= check.tolerance;
  } catch (const std::exception& e) {
    r.residual = std::numeric_limits<double>::quiet_NaN();
    r.detail = std::string("error: ") + e.what();
    r.pass = false;
  }
  return r;
}

std::string to_json_line(const CheckResult& r) {
  nlohmann::json j;
  j["check"] = r.name;
  // JSON has no NaN; a failed evaluation reports null.
  if (std::isfinite(r.residual))
    j["residual"] = r.residual;
  else
    j["residual"] = nullptr;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["detail"] = r.detail;
  return j.dump();
}

bool VerifyReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

VerifyReport run_verify(const ExperimentConfig& cfg, const RunContext& ctx, const EdgeUpdateFn& update) {
  VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.update = update;
  VerifyReport report;
  std::ostringstream lines;
  for (const auto& check : verify_battery(opts)) {
    report.results.push_back(run_check(check));
    const std::string line = to_json_line(report.results.back());
    lines << line << '\n';
    if (ctx.log) *ctx.log << line << '\n';
  }
  if (!ctx.out_dir.empty()) write_file(ctx.out_dir + "/verify.jsonl", lines.str());
  return report;
}

}  // namespace avgbin::harness
