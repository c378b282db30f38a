#include <benchmark/benchmark.h>

#include <cmath>

#include "vanhove/geometry.hpp"

using namespace vanhove;
using dispersion::DispersionModel;

static void BM_TraceHubbard(benchmark::State& state) {
  const auto h = DispersionModel::hubbard(0.3, 0.0);
  const double step = std::pow(2.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(geometry::trace_fermi_curve(h, step, 0.0).size());
}
BENCHMARK(BM_TraceHubbard)->Arg(8)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_NormalForm(benchmark::State& state) {
  const auto h = DispersionModel::hubbard(0.3, 0.0);
  const auto sp = dispersion::find_singular_points(h);
  for (auto _ : state) benchmark::DoNotOptimize(dispersion::morse_normal_form(h, sp.front()).residual);
}
BENCHMARK(BM_NormalForm)->Unit(benchmark::kMillisecond);

static void BM_OverlapExperiment(benchmark::State& state) {
  const auto h = DispersionModel::hubbard(0.3, 0.0);
  const auto curves = geometry::trace_fermi_curve(h, std::pow(2.0, -10), 0.0);
  geometry::OverlapExperiment e;
  e.j_values = {-6, -7, -8, -9, -10};
  e.num_p = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(geometry::overlap_scaling_experiment(h, curves, e).fitted_exponent);
}
BENCHMARK(BM_OverlapExperiment)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_IntervalLemma(benchmark::State& state) {
  auto f = [](double x) { return 0.1 + x * (0.2 + x * (-0.3 + x * 1.5)); };
  for (auto _ : state)
    benchmark::DoNotOptimize(geometry::interval_lemma_check(f, 3, 1.0, 0.01, state.range(0)).measured_volume);
}
BENCHMARK(BM_IntervalLemma)->Arg(1000000)->Unit(benchmark::kMillisecond);
