// Serial reference vs OpenMP kernels on the two hot loops: dense series
// multiplication and column elimination over Z/p^n.

#include <benchmark/benchmark.h>

#include <random>

#include "iwasawa/kernels.hpp"

using namespace iwasawa;

namespace {

kernels::DenseSeries random_dense(const RingContext& ctx, std::mt19937_64& rng) {
    const std::size_t n = ctx.monomials().size();
    kernels::DenseSeries s(n, ctx.precision());
    std::uniform_int_distribution<std::uint64_t> dist(1, ctx.modulus() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t r = dist(rng);
        int v = 0;
        for (std::uint64_t x = r; x % ctx.prime() == 0; x /= ctx.prime()) ++v;
        s.residue[i] = r;
        s.val[i] = static_cast<std::int16_t>(v);
    }
    return s;
}

template <bool Parallel> void bm_convolve(benchmark::State& state) {
    const auto ctx = RingContext::make(3, static_cast<int>(state.range(0)), 20, static_cast<int>(state.range(1)));
    std::vector<std::uint64_t> powers;
    for (int k = 0; k <= ctx.precision(); ++k) powers.push_back(ctx.power(k));
    const kernels::Modulus mod{ctx.prime(), ctx.precision(), powers};
    std::mt19937_64 rng(7);
    auto a = random_dense(ctx, rng);
    auto b = random_dense(ctx, rng);
    kernels::DenseSeries out(a.size(), ctx.precision());
    const auto& table = ctx.monomials().convolution();
    for (auto _ : state) {
        if constexpr (Parallel) kernels::convolve_parallel(table, mod, a, b, out);
        else kernels::convolve_serial(table, mod, a, b, out);
        benchmark::DoNotOptimize(out.residue.data());
    }
    state.counters["monomials"] = static_cast<double>(a.size());
}

template <bool Parallel> void bm_eliminate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(11);
    kernels::ModMatrix base(3, 8, n, n);
    for (auto& x : base.a) x = rng() % base.modulus;
    base.at(0, 0) = 1; // unit pivot
    for (auto _ : state) {
        state.PauseTiming();
        auto m = base;
        state.ResumeTiming();
        if constexpr (Parallel) kernels::eliminate_column_parallel(m, 0, 0);
        else kernels::eliminate_column_serial(m, 0, 0);
        benchmark::DoNotOptimize(m.a.data());
    }
    state.counters["threads"] = kernels::max_threads();
}

} // namespace

BENCHMARK(bm_convolve<false>)->Name("convolve/serial")->Args({2, 16})->Args({3, 16})->Args({4, 12});
BENCHMARK(bm_convolve<true>)->Name("convolve/parallel")->Args({2, 16})->Args({3, 16})->Args({4, 12});
BENCHMARK(bm_eliminate<false>)->Name("eliminate_column/serial")->Arg(256)->Arg(1024)->Arg(3000);
BENCHMARK(bm_eliminate<true>)->Name("eliminate_column/parallel")->Arg(256)->Arg(1024)->Arg(3000);

BENCHMARK_MAIN();
