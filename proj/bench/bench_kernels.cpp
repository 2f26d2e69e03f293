// Serial reference kernels against their OpenMP twins.

#include <vector>

#include <benchmark/benchmark.h>

#include "avgbin/distance.hpp"
#include "avgbin/kernels.hpp"
#include "avgbin/rate_matrix.hpp"
#include "avgbin/uniformization.hpp"

namespace {

using namespace avgbin;

// cycle(6), k = 24: 118755 states.
const BinModel& model() {
  static const BinModel m = make_bin_model(cycle_graph(6), uniform_weights(6), 24);
  return m;
}

void BM_UniformizedStepSerial(benchmark::State& state) {
  const auto& q = model().q;
  std::vector<double> in(q.dim(), 1.0 / static_cast<double>(q.dim())), out(q.dim());
  for (auto _ : state) {
    kernels::uniformized_step_serial(q.offdiagonal_transpose(), q.diagonal(), q.max_exit_rate(), in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_UniformizedStepSerial);

void BM_UniformizedStepParallel(benchmark::State& state) {
  const auto& q = model().q;
  std::vector<double> in(q.dim(), 1.0 / static_cast<double>(q.dim())), out(q.dim());
  for (auto _ : state) {
    kernels::uniformized_step(q.offdiagonal_transpose(), q.diagonal(), q.max_exit_rate(), in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_UniformizedStepParallel);

void transient(benchmark::State& state, bool parallel) {
  const auto& m = model();
  std::vector<double> init(m.q.dim(), 0.0);
  init[0] = 1.0;
  TransientOptions opts;
  opts.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(transient_distribution(m.q, init, 2.0, opts));
}
void BM_TransientSerial(benchmark::State& state) { transient(state, false); }
void BM_TransientParallel(benchmark::State& state) { transient(state, true); }
BENCHMARK(BM_TransientSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransientParallel)->Unit(benchmark::kMillisecond);

// Averaging replicas: one thread against the OpenMP default.
void BM_WassersteinReplicas(benchmark::State& state) {
  const WeightedGraph g = cycle_graph(32);
  const SiteWeights pi = uniform_weights(32);
  const auto eta0 = SimplexPoint::dirac(32, 0);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein_estimate(g, pi, eta0, 20.0, 2.0, 2000, 1, threads));
}
BENCHMARK(BM_WassersteinReplicas)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
