// Serial reference against the OpenMP path for one PaRIS update.
#include <benchmark/benchmark.h>

#include "paris/experiments.hpp"
#include "paris/paris.hpp"

namespace {

void bench_step(benchmark::State& state, paris::Execution exec) {
  const auto n_particles = static_cast<std::size_t>(state.range(0));
  const auto data = paris::simulate_ou_dataset(5.0, 1.0, 0.0, 4, 7);
  const paris::LgssPathModel model(paris::ou_observation_model(5.0, 1.0, 0.0), data.observations);
  paris::ParisConfig cfg;
  cfg.particles = n_particles;
  cfg.mode = paris::Mode::Ideal;
  cfg.execution = exec;
  const auto cloud = paris::init_cloud(model, n_particles, cfg.seed);
  for (auto _ : state) {
    auto next = paris::paris_step(cloud, model, cfg);
    benchmark::DoNotOptimize(next.stats().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StepSerial(benchmark::State& state) { bench_step(state, paris::Execution::Serial); }
void BM_StepParallel(benchmark::State& state) { bench_step(state, paris::Execution::Parallel); }

}  // namespace

BENCHMARK(BM_StepSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StepParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
