// Serial reference vs OpenMP ensemble kernel on the two-level desk case.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ftcollapse/statistics.hpp"

namespace {

using namespace ftcollapse;

const QuantumSystem& desk_system() {
  static const QuantumSystem system = [] {
    const std::vector<double> energies{0.0, 1.0};
    const std::vector<Complex> amplitudes{std::sqrt(0.3), std::sqrt(0.7)};
    return build_system(energies, amplitudes);
  }();
  return system;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const ReductionSchedule schedule(1.0, 1.0);
  const TimeGrid grid = make_grid(1.0, 1024, GridScheme::kUniformT, 1e-3);
  const auto route = static_cast<Route>(state.range(1));
  for (auto _ : state) {
    auto s = run_ensemble_serial(desk_system(), schedule, grid, static_cast<std::size_t>(state.range(0)), 7, route);
    benchmark::DoNotOptimize(s.mean_energy.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const ReductionSchedule schedule(1.0, 1.0);
  const TimeGrid grid = make_grid(1.0, 1024, GridScheme::kUniformT, 1e-3);
  const auto route = static_cast<Route>(state.range(1));
  EnsembleOptions options;
  options.threads = static_cast<int>(state.range(2));
  for (auto _ : state) {
    auto s = run_ensemble(desk_system(), schedule, grid, static_cast<std::size_t>(state.range(0)), 7, route, options);
    benchmark::DoNotOptimize(s.mean_energy.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Args({4096, 0})->Args({4096, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)
    ->ArgsProduct({{4096}, {0, 1}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
