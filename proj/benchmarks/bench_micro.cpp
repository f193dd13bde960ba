#include <benchmark/benchmark.h>

#include "pdeconv/estimate.hpp"
#include "pdeconv/select.hpp"
#include "pdeconv/simulate.hpp"

namespace {

using namespace pdeconv;

FunctionSpec intensity() {
    return FunctionSpec::make(Role::Intensity, Family::Cosine, {.tau = 50.0, .beta = 0.5});
}
FunctionSpec error_density() {
    return FunctionSpec::make(Role::ErrorDensity, Family::PoissonKernel, {.rate = 0.7});
}

void BM_SampleProcess(benchmark::State& state) {
    const auto lam = intensity();
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(sample_ppp(lam, rng));
}
BENCHMARK(BM_SampleProcess);

void BM_SampleRejection(benchmark::State& state) {
    const auto lam = FunctionSpec::make(Role::Intensity, Family::YoungPol,
                                        {.tau = 50.0, .q = 2.0, .J = 64});
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(sample_ppp(lam, rng));
}
BENCHMARK(BM_SampleRejection);

void BM_EmpiricalCoeffs(benchmark::State& state) {
    const auto ds = simulate_dataset(intensity(), error_density(), state.range(0), 1000, 7, 0);
    const int K = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(empirical_coeffs(ds, K));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(merge(ds.processes).size()));
}
BENCHMARK(BM_EmpiricalCoeffs)->Args({50, 16})->Args({50, 64})->Args({500, 32});

void BM_FullAdaptive(benchmark::State& state) {
    const auto ds = simulate_dataset(intensity(), error_density(), 100, 10000, 7, 0);
    const auto emp = empirical_coeffs(ds, 32);
    const auto omega = WeightSequence::flat();
    for (auto _ : state)
        benchmark::DoNotOptimize(full_adaptive(emp, omega, ConstantsMode::Practical(0.002)));
}
BENCHMARK(BM_FullAdaptive);

void BM_ExactRisk(benchmark::State& state) {
    const auto lam = intensity();
    const auto ds = simulate_dataset(lam, error_density(), 100, 1000, 7, 0);
    const auto est = series_estimator(empirical_coeffs(ds, 16), 8);
    const auto omega = WeightSequence::flat();
    for (auto _ : state) benchmark::DoNotOptimize(exact_risk(est, lam, omega, 128));
}
BENCHMARK(BM_ExactRisk);

void BM_OracleRates(benchmark::State& state) {
    const auto omega = WeightSequence::flat();
    const auto gamma = WeightSequence::pol(1.0);
    const auto alpha = WeightSequence::pol(-1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle_rates(omega, gamma, alpha, 1000000, 1000000, 100000));
}
BENCHMARK(BM_OracleRates);

} // namespace

BENCHMARK_MAIN();
