#include <bresse/envelopes.hpp>
#include <bresse/frequency_grid.hpp>
#include <bresse/functionals.hpp>
#include <bresse/spectral_system.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace bresse;

static void BM_Expm(benchmark::State& state) {
    const SystemKind kind = state.range(0) == 1 ? SystemKind::TypeI : SystemKind::TypeIII;
    const ComplexMatrix a = build_generator(Parameters{}, kind, 3.0).matrix * 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm)->Arg(1)->Arg(3);

static void BM_EvolveOnLattice(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const Generator g = build_generator(Parameters{}, SystemKind::TypeI, 1.0);
    const StateVector u0 = random_state(SystemKind::TypeI, rng);
    for (auto _ : state) benchmark::DoNotOptimize(evolve_on_lattice(g, u0, 1e3, 1e6, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EvolveOnLattice)->Arg(8)->Arg(32);

static void BM_FitEnvelope(benchmark::State& state) {
    const Parameters p;
    const std::vector<double> xis = geomspace(0.01, 100.0, static_cast<std::size_t>(state.range(0)));
    const auto trs = envelope_trajectories(p, SystemKind::TypeI, xis, 42);
    for (auto _ : state) benchmark::DoNotOptimize(fit_envelope(trs, p));
}
BENCHMARK(BM_FitEnvelope)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
