#include "tzl/gaussian_sampler.hpp"
#include "tzl/poly_roots.hpp"
#include "tzl/toeplitz_spectra.hpp"
#include "tzl/variance.hpp"
#include "tzl/zero_statistics.hpp"

#include <benchmark/benchmark.h>

using namespace tzl;

static void BM_SampleSection(benchmark::State& state) {
    const auto sp = spectrum(static_cast<int>(state.range(0)), SymbolSpec::disc(1.0));
    std::uint64_t t = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_section(sp, 1, t++));
}
BENCHMARK(BM_SampleSection)->Arg(50)->Arg(200)->Arg(500);

static void BM_FindRoots(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const auto sp = spectrum(p, SymbolSpec::constant(1.0));
    std::vector<SectionSample> samples;
    for (int i = 0; i < 16; ++i) samples.push_back(sample_section(sp, 2, i));
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(find_roots(samples[i++ % samples.size()]));
    state.SetComplexityN(p);
}
BENCHMARK(BM_FindRoots)->Arg(20)->Arg(50)->Arg(100)->Arg(200)->Arg(500)->Complexity();

static void BM_FindRootsIndicatorTail(benchmark::State& state) {
    const auto sp = spectrum(200, SymbolSpec::disc(0.25));
    std::uint64_t t = 0;
    for (auto _ : state) benchmark::DoNotOptimize(find_roots(sample_section(sp, 3, t++)));
}
BENCHMARK(BM_FindRootsIndicatorTail);

static void BM_SpectrumQuadrature(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_quadrature(p, SymbolSpec::disc(1.0)));
}
BENCHMARK(BM_SpectrumQuadrature)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_SpectrumExpInverse(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_expinv(p));
}
BENCHMARK(BM_SpectrumExpInverse)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_DenseToeplitz(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(toeplitz_matrix_general(p, SymbolSpec::exp_inverse()));
}
BENCHMARK(BM_DenseToeplitz)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_VarianceBipotential(benchmark::State& state) {
    const auto sp = spectrum(static_cast<int>(state.range(0)), SymbolSpec::constant(1.0));
    const auto phi = TestFunction::bump(1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(variance_bipotential(sp, phi));
}
BENCHMARK(BM_VarianceBipotential)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_ExpectationExact(benchmark::State& state) {
    const auto sp = spectrum(static_cast<int>(state.range(0)), SymbolSpec::disc(1.0));
    const auto phi = TestFunction::bump(0.8, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(expectation_exact(sp, phi));
}
BENCHMARK(BM_ExpectationExact)->Arg(20)->Arg(200);
BENCHMARK_MAIN();
