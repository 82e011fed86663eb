#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "qfast/constructions.hpp"
#include "qfast/efun.hpp"
#include "qfast/escape.hpp"
#include "qfast/growth.hpp"
#include "qfast/regularity.hpp"
#include "qfast/xreal.hpp"

using namespace qfast;

namespace {

std::vector<TowerReal> random_towers(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TowerReal> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(TowerReal::normalize(static_cast<unsigned>(i % 4), 7.0 + 600.0 * u(rng)));
  return out;
}

void BM_TowerCompare(benchmark::State& state) {
  auto v = random_towers(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compare_resolved(v[i % 1024], v[(i + 7) % 1024]));
    ++i;
  }
}
BENCHMARK(BM_TowerCompare);

void BM_TowerScalePow(benchmark::State& state) {
  auto v = random_towers(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scale_pow(v[i % 1024], 2.5));
    ++i;
  }
}
BENCHMARK(BM_TowerScalePow);

void BM_MaxModulus(benchmark::State& state) {
  EntireFunction f = state.range(0) == 0 ? EntireFunction::exp() : EntireFunction::lacunary5();
  double r = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.max_modulus(r));
    r = r < 1e4 ? r * 1.1 : 1.0;
  }
  state.SetLabel(f.name());
}
BENCHMARK(BM_MaxModulus)->Arg(0)->Arg(1);

void BM_SampledMinModulus(benchmark::State& state) {
  EntireFunction f = EntireFunction::lacunary5();
  for (auto _ : state) benchmark::DoNotOptimize(f.sample_min_modulus(50.0));
}
BENCHMARK(BM_SampledMinModulus);

void BM_EpsRegularityExample62(benchmark::State& state) {
  Example62Model m = build_example62(0.25, 0.75);
  for (auto _ : state) benchmark::DoNotOptimize(check_eps_regularity(m, 0.25, 8.0, 5, 40));
}
BENCHMARK(BM_EpsRegularityExample62);

void BM_WeakRegularityExp(benchmark::State& state) {
  FunctionGrowth g(EntireFunction::exp());
  std::vector<double> eps{0.1, 0.3, 0.5, 0.7, 0.9};
  double t_r = 0.0;
  for (double e : eps) t_r = std::max(t_r, threshold_R_eps(g, e));
  const auto jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(check_weak_regularity(g, eps, t_r, 6, 8, jobs));
}
BENCHMARK(BM_WeakRegularityExp)->Arg(1)->Arg(4);

void BM_ConvexityGrid(benchmark::State& state) {
  FunctionGrowth g(EntireFunction::lacunary5());
  Grid grid{1.0, 40.0, static_cast<std::size_t>(state.range(0)), false, "t"};
  for (auto _ : state) benchmark::DoNotOptimize(check_convexity(g, grid));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexityGrid)->Range(64, 4096)->Complexity();

void BM_BuildExample62(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_example62(0.25, 0.75));
}
BENCHMARK(BM_BuildExample62);

void BM_LacunaryRecipe(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_lacunary_recipe(0.5, 0.8, 12));
}
BENCHMARK(BM_LacunaryRecipe);

void BM_TowerOrbit(benchmark::State& state) {
  EntireFunction f = EntireFunction::exp();
  for (auto _ : state) benchmark::DoNotOptimize(compute_tower_orbit(f, TowerReal::from_double(2.0), 32));
}
BENCHMARK(BM_TowerOrbit);

}  // namespace

BENCHMARK_MAIN();
