// Serial reference vs OpenMP kernels.

#include "paddle/kernels.hpp"
#include "paddle/mechanics.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace paddle;

namespace {

constexpr double kGap = 100e-6;
constexpr double kSlope = -0.01;
constexpr double kLength = 5e-3;

void BM_TrapezoidSerial(benchmark::State& state)
{
    const auto panels = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::trapezoid_gap_integrals(kGap, kSlope, kLength, panels));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrapezoidOmp(benchmark::State& state)
{
    const auto panels = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::omp::trapezoid_gap_integrals(kGap, kSlope, kLength, panels));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<double> sweep_voltages(std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 150.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

ValidatedModel sweep_model()
{
    PaddleModel p;
    p.film.sigma0 = 100e6;
    return validate_model(p);
}

void BM_SweepSerial(benchmark::State& state)
{
    const auto m = sweep_model();
    const auto volts = sweep_voltages(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_voltage_serial(m, Electrode::Bottom, volts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepOmp(benchmark::State& state)
{
    const auto m = sweep_model();
    const auto volts = sweep_voltages(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_voltage(m, Electrode::Bottom, volts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TrapezoidSerial)->RangeMultiplier(10)->Range(1000, 1000000);
BENCHMARK(BM_TrapezoidOmp)->RangeMultiplier(10)->Range(1000, 1000000);
BENCHMARK(BM_SweepSerial)->Arg(21)->Arg(201);
BENCHMARK(BM_SweepOmp)->Arg(21)->Arg(201);

BENCHMARK_MAIN();
