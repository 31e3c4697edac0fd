#include <benchmark/benchmark.h>

#include <cmath>

#include "critheat/heat_kernel.hpp"
#include "critheat/heat_tail.hpp"
#include "critheat/pde_sim.hpp"
#include "critheat/profiles.hpp"
#include "critheat/scaling_dynamics.hpp"
#include "critheat/schedule.hpp"
#include "critheat/spectrum.hpp"

using namespace critheat;

static void BM_Kernel(benchmark::State& state) {
  double r = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(heat_kernel::kernel(r, 3.0, 2.0));
    r = r < 20.0 ? r + 0.01 : 0.5;
  }
}
BENCHMARK(BM_Kernel);

static void BM_ThetaOrigin(benchmark::State& state) {
  const RadialDatum d = as_datum(heat_tail::build_theta0(0.75));
  const double t = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(heat_tail::theta_origin(d, t));
}
BENCHMARK(BM_ThetaOrigin)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMicrosecond);

static void BM_Eig(benchmark::State& state) {
  const double R = static_cast<double>(state.range(0));
  const auto op = spectrum::discretize(R, static_cast<std::size_t>(60 * R));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::eig(op, 3));
}
BENCHMARK(BM_Eig)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_BuildT1(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(profiles::build_T1(1e4, 1e-10));
}
BENCHMARK(BM_BuildT1)->Unit(benchmark::kMillisecond);

static void BM_ImexStep(benchmark::State& state) {
  const pde::Grid g = pde::make_graded_grid(0.01 * static_cast<double>(state.range(0)), 200.0, 1.02);
  const auto u = pde::sample(g, [](double r) { return profiles::eval_Q(r); });
  for (auto _ : state) benchmark::DoNotOptimize(pde::imex_step(g, u, 1e-3, true));
}
BENCHMARK(BM_ImexStep)->Arg(8)->Arg(4)->Arg(2)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_IntegratePiecewise(benchmark::State& state) {
  const TimeSchedule s = make_schedule(16, 0.75, 5);
  scaling::RateConfig rc;
  rc.d = scaling::DKind::random;
  for (auto _ : state) benchmark::DoNotOptimize(scaling::integrate_piecewise(s, rc));
}
BENCHMARK(BM_IntegratePiecewise)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
