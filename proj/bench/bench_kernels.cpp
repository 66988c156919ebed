// Serial reference versus OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "finrank/generate.hpp"
#include "finrank/kernels.hpp"
#include "finrank/moments.hpp"
#include "finrank/operators.hpp"

using namespace finrank;
using kernels::Exec;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state)
{
    state.SetLabel(state.range(1) == 0 ? "serial" : "omp x" + std::to_string(kernels::max_threads()));
}

void BM_WeightedGram(benchmark::State& state)
{
    const auto n = state.range(0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    CMatrix v(n, 64);
    for (Eigen::Index j = 0; j < v.cols(); ++j)
        for (Eigen::Index i = 0; i < n; ++i) v(i, j) = {g(rng), g(rng)};
    std::vector<cplx> w(64);
    for (auto& x : w) x = {g(rng), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_gram(v, w, exec_of(state)));
    label(state);
}

void BM_MomentMatrix(benchmark::State& state)
{
    const auto m = random_measure({.dimension = 3, .count = 8, .seed = 3});
    for (auto _ : state) benchmark::DoNotOptimize(moment_matrix(m, static_cast<int>(state.range(0)), exec_of(state)));
    label(state);
}

void BM_Galerkin(benchmark::State& state)
{
    const auto m = random_measure({.dimension = 2, .count = 8, .seed = 4});
    const auto k = KernelSpec::bargmann();
    for (auto _ : state) benchmark::DoNotOptimize(galerkin_matrix(k, m, static_cast<int>(state.range(0)), exec_of(state)));
    label(state);
}

void BM_TensorQuadrature(benchmark::State& state)
{
    DensityMeasure box(Polydisk::unit(2), DensitySpec::gaussian(0.7));
    const int D = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(moment_matrix_tensor(box, D, D + 2, 4 * (D + 2), exec_of(state)));
    label(state);
}

void BM_FactorizedQuadrature(benchmark::State& state)
{
    DensityMeasure box(Polydisk::unit(2), DensitySpec::gaussian(0.7));
    for (auto _ : state) benchmark::DoNotOptimize(moment_matrix(box, static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_WeightedGram)->ArgsProduct({{120, 480}, {0, 1}});
BENCHMARK(BM_MomentMatrix)->ArgsProduct({{6, 12}, {0, 1}});
BENCHMARK(BM_Galerkin)->ArgsProduct({{10, 20}, {0, 1}});
BENCHMARK(BM_TensorQuadrature)->ArgsProduct({{4, 6}, {0, 1}});
BENCHMARK(BM_FactorizedQuadrature)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
