// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <numbers>

#include "spinorbit/elements.hpp"
#include "spinorbit/experiments.hpp"
#include "spinorbit/fieldmap.hpp"

using namespace spinorbit;

namespace {

ExperimentConfig scan(int chi_points) {
  ExperimentConfig cfg;
  cfg.theta_list = {0.0, std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4};
  for (int k = 0; k < chi_points; ++k) cfg.chi_list.push_back(k * (std::numbers::pi / 2) / chi_points);
  cfg.visibility = 0.9;
  return cfg;
}

void BM_SimulateSerial(benchmark::State& state) {
  const auto cfg = scan(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::simulate_counts(cfg));
  state.SetItemsProcessed(state.iterations() * 4 * state.range(0));
}

void BM_SimulateParallel(benchmark::State& state) {
  const auto cfg = scan(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_counts(cfg));
  state.SetItemsProcessed(state.iterations() * 4 * state.range(0));
}

const SinglePhotonState& vector_beam() {
  static const auto s = apply(qplate(1), SinglePhotonState::horizontal(0));
  return s;
}

void BM_RenderSerial(benchmark::State& state) {
  const GridSpec spec{static_cast<int>(state.range(0)), 3.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(reference::render_mode(vector_beam(), spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_RenderParallel(benchmark::State& state) {
  const GridSpec spec{static_cast<int>(state.range(0)), 3.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(render_mode(vector_beam(), spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Arg(64)->Arg(1024);
BENCHMARK(BM_SimulateParallel)->Arg(64)->Arg(1024);
BENCHMARK(BM_RenderSerial)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderParallel)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
