#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "avgbin/averaging.hpp"
#include "avgbin/harness/config.hpp"
#include "avgbin/harness/experiments.hpp"

namespace avgbin::harness {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct CheckOutcome {
  double residual;
  std::string detail;
};

struct Check {
  std::string name;
  double tolerance;
  std::function<CheckOutcome()> run;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  // Averaging update used by the intertwining and duality checks; swapping in
  // a broken update must make the battery fail.
  EdgeUpdateFn update = edge_update;
};

// Every registered check, in report order.
std::vector<Check> verify_battery(const VerifyOptions& opts = {});

// Runs one check. Exceptions become a failed result with the message as
// detail; a NaN residual fails.
CheckResult run_check(const Check& check);

// {"check":..., "residual":..., "tolerance":..., "pass":..., "detail":...}
std::string to_json_line(const CheckResult& r);

struct VerifyReport {
  std::vector<CheckResult> results;
  bool all_pass() const;
};

// Runs the battery, writes verify.jsonl under ctx.out_dir (when set) and one
// line per check to ctx.log.
VerifyReport run_verify(const ExperimentConfig& cfg, const RunContext& ctx, const EdgeUpdateFn& update = edge_update);

}  // namespace avgbin::harness
