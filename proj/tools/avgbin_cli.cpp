#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "avgbin/format.hpp"
#include "avgbin/harness/config.hpp"
#include "avgbin/harness/experiments.hpp"
#include "avgbin/harness/verify.hpp"
#include "avgbin/state_space.hpp"

namespace {

using namespace avgbin;
using namespace avgbin::harness;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config, "YAML experiment config");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--out", args.out, "output directory (default: config `output`)");
  cmd->add_option("--threads", args.threads, "OpenMP threads; 0 uses the runtime default");
}

ExperimentConfig resolve(const CommonArgs& args) {
  ExperimentConfig cfg = args.config.empty() ? ExperimentConfig{} : load_config(args.config);
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;
  if (!args.out.empty()) cfg.output = args.out;
  return cfg;
}

RunContext context(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output);
  return RunContext{cfg.output, true, &std::cerr};
}

int cmd_gap(const ExperimentConfig& cfg) {
  const auto rows = run_gap_sweep(cfg, context(cfg));
  int flagged = 0;
  for (const auto& r : rows) {
    std::cout << r.graph << " k=" << r.k << " states=" << r.states;
    if (r.skipped)
      std::cout << " skipped\n";
    else
      std::cout << " gap=" << format_double(r.gap) << " rel_dev=" << format_double(r.rel_dev)
                << (r.flagged ? " FLAGGED" : "") << '\n';
    flagged += r.flagged ? 1 : 0;
  }
  std::cout << "wrote " << cfg.output << "/gap_sweep.csv\n";
  return flagged == 0 ? 0 : 1;
}

int cmd_cutoff(const ExperimentConfig& cfg) {
  const auto res = run_cutoff_bin(cfg, context(cfg));
  for (const auto& a : res.annotations)
    std::cout << "k=" << a.k << (a.exact ? " exact" : " bound") << " t_mix=" << format_double(a.t_mix)
              << " C=" << format_double(a.c) << " t_half=" << (a.t_half ? format_double(*a.t_half) : "-") << '\n';
  std::cout << "wrote " << cfg.output << "/cutoff_profile.csv and cutoff_annotations.csv\n";
  return 0;
}

int cmd_avg_profile(const ExperimentConfig& cfg) {
  const auto res = run_avg_profile(cfg, context(cfg));
  for (const auto& w : res.window)
    std::cout << "k=" << w.k << " C=" << format_double(w.c) << " sqrt(k)*E|eta/pi-1|_p=" << format_double(w.scaled_mean)
              << " +- " << format_double(w.scaled_std_err) << '\n';
  std::cout << "wrote " << cfg.output << "/avg_profile.csv, avg_profile_scaled.csv and avg_window.csv\n";
  return 0;
}

int cmd_cdsz(const ExperimentConfig& cfg) {
  const auto res = run_complete_cdsz(cfg, context(cfg));
  std::cout << "n=" << res.n << " t_cdsz=" << format_double(res.t_cdsz)
            << " crossing=" << (res.crossing ? format_double(*res.crossing) : "none")
            << " ratio=" << format_double(res.ratio) << '\n';
  return 0;
}

int cmd_nash(const ExperimentConfig& cfg) {
  for (const auto& r : run_nash(cfg, context(cfg)))
    std::cout << r.graph << " d_hat=" << format_double(r.fit.d_hat) << " t_nash_hat=" << format_double(r.fit.t_nash_hat)
              << " R2=" << format_double(r.fit.r_squared)
              << (r.fit.finite_dimensional ? "" : " not finite-dimensional (" + r.fit.reason + ")") << '\n';
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg) {
  RunContext ctx = context(cfg);
  ctx.log = &std::cout;
  const auto report = run_verify(cfg, ctx);
  std::size_t failed = 0;
  for (const auto& r : report.results) failed += r.pass ? 0 : 1;
  std::cerr << report.results.size() - failed << "/" << report.results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Averaging process and Binomial Splitting experiments"};
  app.require_subcommand(1);
  CommonArgs args;
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const ExperimentConfig&);
    bool config_required;
  };
  const Sub subs[] = {
      {"gap", "spectral gap sweep over k", cmd_gap, true},
      {"cutoff", "Binomial Splitting TV profiles and bounds", cmd_cutoff, true},
      {"avg-profile", "Averaging L^p profiles by Monte Carlo", cmd_avg_profile, true},
      {"cdsz", "L^1 profile on the complete graph", cmd_cdsz, true},
      {"nash", "heat-kernel dimension fits", cmd_nash, true},
      {"verify", "residual battery; nonzero exit on any failure", cmd_verify, false},
  };
  const Sub* chosen = nullptr;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, args, s.config_required);
    cmd->callback([&chosen, &s] { chosen = &s; });
  }
  CLI11_PARSE(app, argc, argv);
  try {
    const ExperimentConfig cfg = resolve(args);
    return chosen->run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
