#include <benchmark/benchmark.h>

#include <random>

#include "consensus/consensus.hpp"

using namespace consensus;

namespace {

Matrix random_matrix(std::size_t n, std::uint64_t seed, double shift = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = g(rng) / static_cast<double>(n) + (i == j ? shift : 0.0);
    return m;
}

CouplingMatrix ring(std::size_t m) {
    Matrix l(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        l(i, (i + 1) % m) += 1.0;
        l(i, (i + m - 1) % m) += 1.0;
        l(i, i) -= 2.0;
    }
    return validate_coupling(l);
}

void BM_Eigenvalues(benchmark::State& state) {
    const Matrix a = random_matrix(static_cast<std::size_t>(state.range(0)), 11);
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(a));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(4, 64);

void BM_Lyapunov(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(n, 12, -2.0);
    const Matrix w = Matrix::identity(n);
    for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(a, w));
}
BENCHMARK(BM_Lyapunov)->RangeMultiplier(2)->Range(2, 16);

void BM_AnalyzeSpectrum(benchmark::State& state) {
    const CouplingMatrix l = ring(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(analyze_spectrum(l));
}
BENCHMARK(BM_AnalyzeSpectrum)->RangeMultiplier(2)->Range(4, 64);

void BM_SimulateFull(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const Matrix a{2, 2, {0.0, 1.0, -1.0, 0.0}};
    const SystemSpec s(a, Matrix::identity(2), 1.0, ring(m));
    const Matrix x0 = random_initial_states(m, 2, 5);
    const SimConfig cfg{0.01, 10.0, 10};
    for (auto _ : state) benchmark::DoNotOptimize(simulate_full(s, x0, cfg));
}
BENCHMARK(BM_SimulateFull)->RangeMultiplier(2)->Range(4, 32);

}  // namespace

BENCHMARK_MAIN();
