#include <benchmark/benchmark.h>

#include "tfbm/mesh.hpp"
#include "tfbm/oracle.hpp"
#include "tfbm/scheme.hpp"
#include "tfbm/special_functions.hpp"
#include "tfbm/time_grid.hpp"

using namespace tfbm;

static void BM_BesselK(benchmark::State& state)
{
    double x = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_k(-0.3, x));
        x = x < 50.0 ? x * 1.1 : 1e-3;
    }
}
BENCHMARK(BM_BesselK);

static void BM_DiffusionCoefficient(benchmark::State& state)
{
    const ModelParams params(0.7, 0.01);
    double t = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffusion_coefficient(params, t));
        t = t < 500.0 ? t * 1.1 : 0.01;
    }
}
BENCHMARK(BM_DiffusionCoefficient);

static void BM_ImplicitStep(benchmark::State& state)
{
    const auto m = static_cast<std::size_t>(state.range(0));
    const SpatialMesh mesh({-100.0, 100.0, -100.0, 100.0}, m, m);
    const Field u = initial_condition(mesh, gaussian_initial_data);
    const StepOperator op = StepOperator::from_coefficient(state.range(1) / 100.0, mesh);
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(u, op));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m * m));
}
BENCHMARK(BM_ImplicitStep)->Args({99, 5})->Args({199, 5})->Args({199, 100})->Args({399, 5});

static void BM_GradedRun(benchmark::State& state)
{
    const ModelParams params(0.3, 0.1);
    const SpatialMesh mesh({-100.0, 100.0, -100.0, 100.0}, 199, 199);
    const TimeGrid grid = grid_for(params, 0.05, static_cast<double>(state.range(0)));
    const Field u0 = initial_condition(mesh, gaussian_initial_data);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(params, mesh, grid, u0));
    }
    state.counters["steps"] = static_cast<double>(grid.steps());
}
BENCHMARK(BM_GradedRun)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_VarianceGrowth(benchmark::State& state)
{
    const ModelParams params(0.3, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(variance_growth(params, 10.0));
    }
}
BENCHMARK(BM_VarianceGrowth)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
