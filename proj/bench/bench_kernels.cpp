// Serial tape reference vs batched OpenMP kernel for one full loss +
// gradient evaluation, plus the plain forward pass.
//
//   pinnlab_bench --benchmark_filter=LossGradient
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "pinnlab/batched.hpp"
#include "pinnlab/physics.hpp"

namespace pinnlab {
namespace {

struct Setup {
  MlpConfig config = MlpConfig::burgers_default();
  BurgersProblem problem;
  Params params;
  TrainingSet data;

  explicit Setup(std::size_t nf) : params(init_glorot(config, 1)), data(sample_uniform(50, 50, nf, 0)) {}
};

void BM_LossGradientReference(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loss_gradient_reference(s.params, s.config, s.problem, s.data));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.data.xr.size() + 100));
}

void BM_LossGradientBatched(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loss_gradient(s.params, s.config, s.problem, s.data));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.data.xr.size() + 100));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_ForwardValues(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  std::vector<double> t, x;
  for (const SamplePoint& p : s.data.xr) {
    t.push_back(p.t);
    x.push_back(p.x);
  }
  for (auto _ : state) benchmark::DoNotOptimize(batched::evaluate_values(s.params, s.config, t, x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.size()));
}

void BM_ForwardValuesScalar(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    double sum = 0.0;
    for (const SamplePoint& p : s.data.xr) sum += forward_value(s.params, s.config, p.t, p.x);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.data.xr.size()));
}

BENCHMARK(BM_LossGradientReference)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossGradientBatched)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardValuesScalar)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardValues)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pinnlab

BENCHMARK_MAIN();
