// Serial reference against the OpenMP kernels on the hot paths.
//
//   ./bench_kernels --benchmark_filter=joint
//
// Serial and parallel results are bitwise equal; only the time differs.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cascade/execution.hpp"
#include "cascade/kernels.hpp"
#include "cascade/oracle.hpp"
#include "cascade/rates.hpp"
#include "cascade/spectra.hpp"

using namespace cascade;

namespace {

CascadeSystem regime1() {
    CascadeSystem s;
    s.omega01 = 1.0;
    s.omega12 = 10.0;
    s.density_y = SpectralDensity(FlatWindow{1e-4, 0.0, 3.0});
    s.density_z = SpectralDensity(FlatWindow{0.02 / std::numbers::pi, 2.0, 18.0});
    return s;
}

CascadeSystem small_cascade() {
    CascadeSystem s;
    s.omega01 = 1.0;
    s.omega12 = 3.0;
    s.density_y = SpectralDensity(FlatWindow{0.016, 0.75, 1.25});
    s.density_z = SpectralDensity(FlatWindow{0.1 / std::numbers::pi, 2.5, 3.5});
    return s;
}

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void joint(benchmark::State& state) {
    const CascadeSystem s = regime1();
    const SpectralConstants c = spectral_constants(s, perturbed_constant(s));
    for (auto _ : state) benchmark::DoNotOptimize(joint_spectrum(s, c, {}, mode(state)).mass);
}

void sum_closed(benchmark::State& state) {
    const CascadeSystem s = regime1();
    const SpectralConstants c = spectral_constants(s, perturbed_constant(s));
    const SpectrumGrid2D j = joint_spectrum(s, c);
    for (auto _ : state)
        benchmark::DoNotOptimize(sum_energy_closed(s, c, j.omega_sum, {}, mode(state)).mass);
}

void oracle(benchmark::State& state) {
    const CascadeSystem s = small_cascade();
    const DiscreteModel m = discretize(s, 100, 100, {0.7, 1.3}, {2.4, 3.6});
    EvolveOptions o;
    o.exec = mode(state);
    const double dt = 0.02 / m.max_detuning();
    for (auto _ : state) benchmark::DoNotOptimize(evolve(m, 200 * dt, dt, o).max_norm_error);
}

void volterra(benchmark::State& state) {
    const CascadeSystem s = small_cascade();
    const PerturbedConstants k = perturbed_constant(s);
    const MemoryKernel q = build_kernel(s.density_y, s.omega01, k.gamma1, 0.02, 4001);
    VolterraOptions o;
    o.exec = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(solve_volterra(q, 80.0, o).a0.back());
}

void zeno(benchmark::State& state) {
    const CascadeSystem s = regime1();
    std::vector<double> l1;
    for (int i = 0; i < 64; ++i) l1.push_back(1e-3 * std::pow(10.0, 0.1 * i));
    for (auto _ : state) benchmark::DoNotOptimize(zeno_curve(s, l1, {}, mode(state)).size());
}

} // namespace

// Argument 0: serial reference, 1: OpenMP.
BENCHMARK(joint)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(sum_closed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(oracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(volterra)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(zeno)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
