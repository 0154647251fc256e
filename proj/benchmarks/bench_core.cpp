#include <benchmark/benchmark.h>

#include "pcae/autoencoder.hpp"
#include "pcae/dataset.hpp"
#include "pcae/matrix.hpp"
#include "pcae/random.hpp"
#include "pcae/spectral.hpp"

using namespace pcae;

static void BM_Matmul(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    RandomSource rng(1);
    const Matrix a = gaussian_fill(rng, n, n, 1.0);
    const Matrix b = gaussian_fill(rng, n, n, 1.0);
    for (auto _ : state) {
        Matrix c = matmul(a, b);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

static void BM_SymEigen(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    RandomSource rng(2);
    const Matrix g = gaussian_fill(rng, d, d, 1.0);
    const Matrix a = matmul(g, transpose(g));
    for (auto _ : state) {
        SymEigen e = sym_eigen(a);
        benchmark::DoNotOptimize(e.values.data());
    }
}
BENCHMARK(BM_SymEigen)->Arg(16)->Arg(64)->Arg(128);

static void BM_ThinSVD(benchmark::State& state) {
    RandomSource rng(3);
    const Matrix a = gaussian_fill(rng, static_cast<std::size_t>(state.range(0)),
                                   static_cast<std::size_t>(state.range(1)), 1.0);
    for (auto _ : state) {
        ThinSVD svd = thin_svd(a);
        benchmark::DoNotOptimize(svd.sigma.data());
    }
}
BENCHMARK(BM_ThinSVD)->Args({200, 50})->Args({784, 16});

static void BM_TrainEpoch(benchmark::State& state) {
    RandomSource rng(4);
    PlantedSpectrum spec;
    spec.basis = random_orthogonal(20, rng);
    spec.stds = {10, 8, 6, 5, 4, 3, 2.5, 2, 1.9, 1.8, 1.7, 1.6, 1.5, 1.4, 1.3, 1.2, 1.1, 1.0,
                 0.9, 0.8};
    spec.mean.assign(20, 0.0);
    const Dataset data = synthesize_gaussian(spec, 2000, rng);
    TrainConfig cfg;
    cfg.epochs = 1;
    for (auto _ : state) {
        auto [params, report] = train(data, 5, cfg);
        benchmark::DoNotOptimize(params.w2.data());
    }
}
BENCHMARK(BM_TrainEpoch);

BENCHMARK_MAIN();
