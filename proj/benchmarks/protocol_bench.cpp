#include <benchmark/benchmark.h>

#include <random>

#include "qtel/qtel.hpp"

using namespace qtel;

namespace {

SchmidtSpectrum spectrum_for(std::size_t n) {
    // Geometric-ish weights, flattened enough that p_max <= 1/3.
    std::vector<double> p(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += p[k] = 1.0 + 0.3 / static_cast<double>(k + 1);
    for (auto& x : p) x /= sum;
    return SchmidtSpectrum::from_probs(p);
}

void BM_SchmidtDecompose(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    ComplexVec v(dim * dim);
    for (std::size_t i = 0; i < v.dim(); ++i) v[i] = Complex(g(rng), g(rng));
    v = v.normalized();
    for (auto _ : state) benchmark::DoNotOptimize(schmidt_decompose(v, {dim, dim}));
}
BENCHMARK(BM_SchmidtDecompose)->Arg(4)->Arg(16)->Arg(64);

void BM_SolveD2(benchmark::State& state) {
    const auto s = spectrum_for(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_d2(s));
}
BENCHMARK(BM_SolveD2)->Arg(3)->Arg(16)->Arg(128);

void BM_SolveNumerical(benchmark::State& state) {
    const auto s = SchmidtSpectrum::from_probs({0.3, 0.3, 0.2, 0.2});
    for (auto _ : state) benchmark::DoNotOptimize(solve_numerical(s, 3));
}
BENCHMARK(BM_SolveNumerical);

void BM_Synthesize(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto s = spectrum_for(n);
    for (auto _ : state) benchmark::DoNotOptimize(synthesize(s, 2));
}
BENCHMARK(BM_Synthesize)->Arg(3)->Arg(8)->Arg(16);

void BM_RunProtocol(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto s = spectrum_for(n);
    const Protocol p = synthesize(s, 2);
    std::mt19937_64 rng(2);
    const InputQudit psi = random_qudit(2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(run_protocol(psi, s, p));
}
BENCHMARK(BM_RunProtocol)->Arg(3)->Arg(8)->Arg(16);

}  // namespace
BENCHMARK_MAIN();
