#include <benchmark/benchmark.h>

#include <vector>

#include "fracrte/ctrw.hpp"
#include "fracrte/diffusion.hpp"
#include "fracrte/specfun.hpp"
#include "fracrte/spectral.hpp"
#include "fracrte/subordination.hpp"
#include "fracrte/transport.hpp"

using namespace fracrte;

namespace {

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

void BM_MittagLefflerReal(benchmark::State& state) {
  double x = -0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mittag_leffler_real(0.5, x));
    x = x < -50.0 ? -0.1 : x * 1.07;
  }
}
BENCHMARK(BM_MittagLefflerReal);

void BM_StableDensity(benchmark::State& state) {
  const double alpha = static_cast<double>(state.range(0)) / 100.0;
  double s = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stable_density(alpha, s));
    s = s > 20.0 ? 0.05 : s * 1.1;
  }
}
BENCHMARK(BM_StableDensity)->Arg(25)->Arg(75)->Arg(99);

void BM_Decompose(benchmark::State& state) {
  const MediumParams p = MediumParams::reference(0.5);
  const int n = static_cast<int>(state.range(0));
  double k = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose(assemble_A(k, p, n)));
    k = k > 100.0 ? 0.1 : k * 1.05;
  }
}
BENCHMARK(BM_Decompose)->Arg(1)->Arg(7)->Arg(31);

void BM_EnergyDensityGrid(benchmark::State& state) {
  const MediumParams p = MediumParams::reference(0.5);
  const std::vector<double> x = grid(-1.0, 1.0, 161), t{0.01, 0.05, 0.1};
  const auto mode = state.range(1) ? EvolutionMode::exact : EvolutionMode::paper;
  for (auto _ : state) benchmark::DoNotOptimize(energy_density(x, t, p, static_cast<int>(state.range(0)), mode));
}
BENCHMARK(BM_EnergyDensityGrid)->Args({1, 0})->Args({7, 1})->Unit(benchmark::kMillisecond);

void BM_DiffusionMWrightGrid(benchmark::State& state) {
  const DiffusionParams dp = DiffusionParams::from_medium(MediumParams::reference(0.5));
  const std::vector<double> x = grid(-1.0, 1.0, 161), t{0.01, 0.05, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(diffusion_density_mwright(x, t, dp));
}
BENCHMARK(BM_DiffusionMWrightGrid)->Unit(benchmark::kMillisecond);

void BM_SubordinationKernel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(SubordinationKernel(0.75, 0.1));
}
BENCHMARK(BM_SubordinationKernel)->Unit(benchmark::kMillisecond);

void BM_CtrwStep(benchmark::State& state) {
  const MediumParams p = MediumParams::reference(0.5);
  const CTRWParams cp = map_params(p, tau_for_xi(p, 0.02));
  RandomStream rng(1, 0);
  WalkerState w;
  w.mu = 0.3;
  for (auto _ : state) {
    w = step(w, cp, p.phase, rng);
    if (!w.alive) w = WalkerState{};
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CtrwStep);

void BM_CtrwSimulate(benchmark::State& state) {
  const MediumParams p = MediumParams::reference(0.5);
  const std::vector<double> x = grid(-0.5, 0.5, 41), t{0.05};
  const double tau = tau_for_xi(p, 0.02);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_density(static_cast<std::uint64_t>(state.range(0)), t, x, p, tau, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CtrwSimulate)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
