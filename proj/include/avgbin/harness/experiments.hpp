#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "avgbin/distance.hpp"
#include "avgbin/harness/config.hpp"
#include "avgbin/harness/profile_csv.hpp"
#include "avgbin/nash.hpp"

namespace avgbin::harness {

// Where results go. An empty out_dir keeps everything in memory.
struct RunContext {
  std::string out_dir;
  bool timestamp = true;
  std::ostream* log = nullptr;
};

// First grid time at which the profile falls to `level` or below, linearly
// interpolated with the preceding point; nullopt if it never does.
std::optional<double> crossing_time(const std::vector<ProfilePoint>& profile, double level);

struct GapRow {
  std::string graph;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t states = 0;
  double gap = 0.0;
  double gap1 = 0.0;
  double rel_dev = 0.0;  // |gap_k / gap_1 - 1|
  bool flagged = false;  // rel_dev > 1e-8
  bool skipped = false;  // state space over the enumeration cap
  std::string note;
};
std::vector<GapRow> run_gap_sweep(const ExperimentConfig& cfg, const RunContext& ctx);

struct CutoffAnnotation {
  std::size_t k = 0;
  bool exact = false;
  std::uint64_t states = 0;
  double t_rel = 0.0;
  double t_mix = 0.0;
  double c = 0.0;
  double t_minus = 0.0;
  double t_plus = 0.0;
  // High-density exponents, only when k > n^2.
  std::optional<double> pre_a, pre_b, pre_t_plus, pre_t_minus;
  std::optional<double> t_half;  // exact mode: first t with d <= 1/2
};

struct CutoffResult {
  std::vector<ProfileRecord> records;
  std::vector<CutoffAnnotation> annotations;
  // Exact worst-pile profile per k (empty in bound mode), in k order.
  std::vector<std::vector<ProfilePoint>> exact_profiles;
};
// Per k: exact worst-pile TV when |Omega_k| <= exact_threshold, plus the
// bracket [lower, upper] from the exact-moment Wilson bound over pile starts and
// sqrt(e k sup_eta E|eta_t/pi - 1|_2^2).
CutoffResult run_cutoff_bin(const ExperimentConfig& cfg, const RunContext& ctx);

struct AvgProfileResult {
  std::vector<ProfileRecord> records;         // wasserstein (MC) and lower (|h_t^eta - 1|_p)
  std::vector<ProfileRecord> scaled_records;  // same, times sqrt(k)
  struct WindowValue {
    std::size_t k;
    double c;
    double t_plus;
    double scaled_mean;
    double scaled_std_err;
  };
  std::vector<WindowValue> window;  // sqrt(k) E|eta_t/pi - 1|_p at t^+(C)
};
AvgProfileResult run_avg_profile(const ExperimentConfig& cfg, const RunContext& ctx);

struct CdszResult {
  std::size_t n = 0;
  double t_cdsz = 0.0;
  std::vector<ProfileRecord> records;  // sup over Dirac starts of the MC L^1 profile
  std::optional<double> crossing;      // first time the profile reaches 1
  double ratio = 0.0;                  // crossing / t_cdsz
};
// Complete graph from cfg.graph; time grid in multiples of t_CDSZ when
// time_grid.mode is trel (the t_rel unit is replaced by t_CDSZ here).
CdszResult run_complete_cdsz(const ExperimentConfig& cfg, const RunContext& ctx);

struct NashRow {
  std::string graph;
  NashFit fit;
  std::vector<double> times;
  std::vector<double> max_h;
};
std::vector<NashRow> run_nash(const ExperimentConfig& cfg, const RunContext& ctx);

}  // namespace avgbin::harness
