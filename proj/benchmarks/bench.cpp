#include <benchmark/benchmark.h>

#include "sdelab/bspde.hpp"
#include "sdelab/corpus.hpp"

using namespace sdelab;

static void BM_dyadic_decompose(benchmark::State& state) {
    const SpaceGrid grid{static_cast<std::size_t>(state.range(0)), 16.0 * 3.14159265358979323846};
    const auto cutoffs = build_cutoffs(grid.n, grid.length);
    const auto field = make_field_corpus(grid, 1, 7)[0];
    for (auto _ : state) benchmark::DoNotOptimize(decompose(field, cutoffs));
}
BENCHMARK(BM_dyadic_decompose)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_ensemble(benchmark::State& state) {
    const TimeGrid tg{1.0, 1024};
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_ensemble({42, 0, 0},
                                                 static_cast<std::size_t>(state.range(0)), tg, 1));
}
BENCHMARK(BM_ensemble)->Arg(16)->Arg(128);

static void BM_solve_backward(benchmark::State& state) {
    const auto model = make_model("deterministic");
    const auto n = static_cast<std::size_t>(state.range(0));
    const BrownianPath flat({1.0, n}, 1);
    const SpaceGrid grid{n, 16.0 * 3.14159265358979323846};
    const auto sl = model_slices(model, flat, grid);
    for (auto _ : state) benchmark::DoNotOptimize(solve_backward(sl));
}
BENCHMARK(BM_solve_backward)->Arg(64)->Arg(256);

static void BM_conditional_expectation(benchmark::State& state) {
    const auto F = make_functional("w1sq");
    const BrownianPath p = sample_path({3, 0, 0}, {1.0, 64}, 1);
    const ConditionalConfig cfg{static_cast<std::size_t>(state.range(0)), 5};
    for (auto _ : state) benchmark::DoNotOptimize(conditional_expectation(F, 32, p, 0, cfg));
}
BENCHMARK(BM_conditional_expectation)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
