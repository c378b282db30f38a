#include <benchmark/benchmark.h>

#include <cmath>

#include "vanhove/quad.hpp"
#include "vanhove/special.hpp"

using namespace vanhove;

static void BM_Gauss4D(benchmark::State& state) {
  quad::QuadSpec s;
  s.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  auto f = [](std::span<const double> x) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]));
  };
  long evals = 0;
  for (auto _ : state) {
    const auto r = quad::integrate(f, quad::Box::symmetric(4), s);
    evals = r.evaluations;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["evaluations"] = static_cast<double>(evals);
}
BENCHMARK(BM_Gauss4D)->Arg(4)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_LogSingular1D(benchmark::State& state) {
  quad::QuadSpec s;
  s.abs_tol = 1e-13;
  s.rel_tol = 1e-13;
  auto f = [](std::span<const double> x) { return std::log(x[0]); };
  for (auto _ : state) benchmark::DoNotOptimize(quad::integrate(f, quad::Box::interval(0.0, 1.0), s).value);
}
BENCHMARK(BM_LogSingular1D)->Unit(benchmark::kMicrosecond);

static void BM_MonteCarlo4D(benchmark::State& state) {
  auto f = [](std::span<const double> x) { return x[0] * x[1] + x[2] * x[3]; };
  for (auto _ : state)
    benchmark::DoNotOptimize(quad::integrate_mc(f, quad::Box::unit(4), state.range(0), 7).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo4D)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Dilog(benchmark::State& state) {
  double x = -0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::dilog(x));
    x = x < 0.9 ? x + 1e-3 : -0.9;
  }
}
BENCHMARK(BM_Dilog);
