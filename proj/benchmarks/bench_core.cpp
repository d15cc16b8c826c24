#include <benchmark/benchmark.h>

#include <vector>

#include "siirv/catalog.hpp"
#include "siirv/covers.hpp"
#include "siirv/expfam.hpp"
#include "siirv/learning.hpp"
#include "siirv/pmf.hpp"

namespace {

using namespace siirv;

void BM_PmfMember(benchmark::State& state) {
    const auto f = state.range(0) == 0 ? catalog::geometric(0.5, 3.0) : catalog::zeta(5.5, 9.0);
    Rng rng(1);
    const ParamVector a = f.base_region.sample(rng);
    for (auto _ : state) benchmark::DoNotOptimize(pmf_member(f, a, 1e-12));
}
BENCHMARK(BM_PmfMember)->Arg(0)->Arg(1);

void BM_Convolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const PMFTable p{0, std::vector<double>(n, 1.0 / static_cast<double>(n)), 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(convolve(p, p));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_SparsifyFamily(benchmark::State& state) {
    const auto f = catalog::geometric(0.5, 3.0);
    const double eps = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sparsify_family(f, eps));
}
BENCHMARK(BM_SparsifyFamily)->Arg(5)->Arg(10)->Arg(20);

void BM_NearestInCover(benchmark::State& state) {
    const auto f = catalog::geometric(0.8, 1.2);
    const auto n = static_cast<std::uint64_t>(state.range(0));
    const auto cover = cover_siierv(f, n, 0.2);
    Rng rng(7);
    std::vector<ParamVector> params;
    std::vector<PMFTable> terms;
    for (std::uint64_t i = 0; i < n; ++i) {
        params.push_back({rng.uniform(0.8, 1.2)});
        terms.push_back(pmf_member(f, params.back(), 1e-14));
    }
    const auto x = convolve_all(terms);
    NearestOptions opt;
    opt.terms_hint = params;
    for (auto _ : state) benchmark::DoNotOptimize(nearest_in_cover(x, cover, f, opt));
}
BENCHMARK(BM_NearestInCover)->Arg(3)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_EstimateMeanVar(benchmark::State& state) {
    const auto f = catalog::geometric(0.5, 3.0);
    std::vector<PMFTable> terms;
    Rng gen(3);
    for (int i = 0; i < 50; ++i) terms.push_back(pmf_member(f, f.base_region.sample(gen), 1e-14));
    const auto x = convolve_all(terms);
    Rng rng(11);
    for (auto _ : state) {
        auto oracle = SampleOracle::from_table(x, 1u << 24);
        benchmark::DoNotOptimize(estimate_mean_var(oracle, 0.1, 0.1, rng));
    }
}
BENCHMARK(BM_EstimateMeanVar)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
