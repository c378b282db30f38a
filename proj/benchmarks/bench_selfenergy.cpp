#include <benchmark/benchmark.h>

#include <cmath>

#include "vanhove/bubbles.hpp"
#include "vanhove/fitlab.hpp"
#include "vanhove/selfenergy.hpp"

using namespace vanhove;
namespace se = vanhove::selfenergy;

namespace {

quad::QuadSpec tight() {
  quad::QuadSpec s;
  s.abs_tol = 1e-12;
  s.rel_tol = 1e-12;
  return s;
}

}  // namespace

// Zero-temperature Im d/dq0 at q0 = 10^-k from the 1D dilogarithm form.
static void BM_ImD0(benchmark::State& state) {
  const double q0 = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(se::im_d0_sigma2(q0, tight()).value);
}
BENCHMARK(BM_ImD0)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_FrequencyIntegral2D(benchmark::State& state) {
  quad::QuadSpec s;
  s.abs_tol = 1e-10;
  s.rel_tol = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(se::frequency_integral(0.01, se::IForm::log_2d, s).value);
}
BENCHMARK(BM_FrequencyIntegral2D)->Unit(benchmark::kMillisecond);

static void BM_Zeta12Reduced(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(se::zeta12(1e-4, se::Zeta12Form::reduced_1d, tight()).value);
}
BENCHMARK(BM_Zeta12Reduced)->Unit(benchmark::kMicrosecond);

static void BM_Sigma2FiniteBeta(benchmark::State& state) {
  quad::QuadSpec s;
  s.abs_tol = 1e-5;
  s.rel_tol = 1e-4;
  const auto st = matsubara::ThermalState::at_beta(4.0);
  for (auto _ : state) benchmark::DoNotOptimize(se::sigma2(M_PI / 4.0, se::Vec2::Zero(), st, s).value);
}
BENCHMARK(BM_Sigma2FiniteBeta)->Unit(benchmark::kMillisecond);

static void BM_FrequencySumOracle(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(se::frequency_sum_oracle(4.0, 0, 100.0 * M_PI / 4.0, grid).value);
}
BENCHMARK(BM_FrequencySumOracle)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_FiniteBetaZeta2(benchmark::State& state) {
  quad::QuadSpec s;
  s.abs_tol = 1e-5;
  s.rel_tol = 1e-4;
  s.max_evaluations = 200000;
  const auto st = matsubara::ThermalState::at_beta(static_cast<double>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(se::finite_beta_term(se::FiniteBetaTerm::zeta2, 0.1, st, s).value);
}
BENCHMARK(BM_FiniteBetaZeta2)->Arg(4)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_BubblePP(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bubbles::bubble_pp(50.0));
}
BENCHMARK(BM_BubblePP)->Unit(benchmark::kMicrosecond);

static void BM_FitLogSquare(benchmark::State& state) {
  std::vector<fitlab::Sample> s;
  for (int i = 0; i < state.range(0); ++i) {
    const double x = std::pow(10.0, -2.0 - 4.0 * i / (state.range(0) - 1.0)), u = std::log(x);
    s.push_back({x, 2.0 * u * u - u + 0.5 + 1e-3 * std::sin(7.0 * u)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fitlab::fit_log_square(s).a);
}
BENCHMARK(BM_FitLogSquare)->Arg(9)->Arg(100);
