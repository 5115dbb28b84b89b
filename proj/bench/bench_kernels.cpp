// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "ctfa/cliques.hpp"
#include "ctfa/corr.hpp"
#include "ctfa/simgen.hpp"

namespace {

using namespace ctfa;

Matrix random_data(int n, int p) {
    Rng rng(42);
    std::normal_distribution<double> z;
    Matrix x(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) x(i, j) = z(rng);
    // a shared component so thresholding yields non-trivial graphs
    for (int i = 0; i < n; ++i) {
        const double f = z(rng);
        for (int j = 0; j < p; ++j) x(i, j) += 0.8 * f * ((j % 10) < 5 ? 1.0 : 0.0);
    }
    return x;
}

void BM_correlation_serial(benchmark::State& state) {
    const auto x = random_data(1000, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(serial::sample_correlation(x));
}

void BM_correlation_parallel(benchmark::State& state) {
    const auto x = random_data(1000, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sample_correlation(x));
}

void BM_threshold_serial(benchmark::State& state) {
    const auto r = sample_correlation(random_data(500, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(serial::threshold_edges(r, 0.2));
}

void BM_threshold_parallel(benchmark::State& state) {
    const auto r = sample_correlation(random_data(500, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(threshold_edges(r, 0.2));
}

void BM_simplicial_serial(benchmark::State& state) {
    const auto r = sample_correlation(random_data(500, static_cast<int>(state.range(0))));
    const auto e = threshold_edges(r, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(serial::simplicial_vertices(e));
}

void BM_simplicial_parallel(benchmark::State& state) {
    const auto r = sample_correlation(random_data(500, static_cast<int>(state.range(0))));
    const auto e = threshold_edges(r, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(simplicial_vertices(e));
}

}  // namespace

BENCHMARK(BM_correlation_serial)->Arg(50)->Arg(200);
BENCHMARK(BM_correlation_parallel)->Arg(50)->Arg(200);
BENCHMARK(BM_threshold_serial)->Arg(50)->Arg(200);
BENCHMARK(BM_threshold_parallel)->Arg(50)->Arg(200);
BENCHMARK(BM_simplicial_serial)->Arg(50)->Arg(200);
BENCHMARK(BM_simplicial_parallel)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
