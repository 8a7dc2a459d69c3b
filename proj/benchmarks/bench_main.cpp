#include "powerarith/axioms.hpp"
#include "powerarith/congruence.hpp"
#include "powerarith/eval.hpp"
#include "powerarith/inequality.hpp"
#include "powerarith/kronecker.hpp"
#include "powerarith/mann.hpp"

#include <benchmark/benchmark.h>

using namespace powerarith;

namespace {

void BM_CarmichaelLambda(benchmark::State& state) {
    const auto top = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        std::uint64_t acc = 0;
        for (std::uint64_t n = 1; n <= top; ++n) acc += carmichael_lambda(n);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CarmichaelLambda)->Arg(1000)->Arg(5000);

void BM_LogEnclosure(benchmark::State& state) {
    const auto bits = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(log_enclosure(2, 3, bits));
}
BENCHMARK(BM_LogEnclosure)->Arg(16)->Arg(64)->Arg(256)->Arg(1024);

void BM_EnumerateSolutions(benchmark::State& state) {
    auto eq = PowerEquation::parse_inline("1*3^a - 1*2^b = 1*2^c");
    const auto bound = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_solutions(eq, bound));
}
BENCHMARK(BM_EnumerateSolutions)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MannAxiom(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mann_axiom({1, -1}, 1, {3, 2, 2}));
}
BENCHMARK(BM_MannAxiom)->Unit(benchmark::kMillisecond);

void BM_FindFracHit(benchmark::State& state) {
    // Interval width 10^-digits around 0.123456...
    const Rat lo = parse_rat("0.1234561");
    const Rat hi = lo + make_rat(1, ipow(10, static_cast<std::uint64_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(find_frac_hit(2, 3, lo, hi));
}
BENCHMARK(BM_FindFracHit)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

void BM_FindRatioIn(benchmark::State& state) {
    const Rat lo = make_rat(314159, 100000);
    const Rat hi = lo * (1 + make_rat(1, ipow(10, static_cast<std::uint64_t>(state.range(0)))));
    for (auto _ : state) benchmark::DoNotOptimize(find_ratio_in(2, 3, OpenInterval(lo, hi)));
}
BENCHMARK(BM_FindRatioIn)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

LinearIneqSystem three_var() {
    // y < x < y + z/1000, x, z in 2^N, y in 3^N.
    LinearIneqSystem s;
    s.vars = {{"x", 2}, {"y", 3}, {"z", 2}};
    s.rows = {{Rat(1), Rat(-1), Rat(0)}, {Rat(-1), Rat(1), make_rat(1, 1000)}};
    return s;
}

void BM_SolveHomogeneous(benchmark::State& state) {
    auto sys = three_var();
    for (auto _ : state) benchmark::DoNotOptimize(solve_homogeneous(2, 3, sys));
}
BENCHMARK(BM_SolveHomogeneous)->Unit(benchmark::kMillisecond);

void BM_SolveMod3(benchmark::State& state) {
    LinearIneqSystem s;
    s.vars = {{"x", 2}, {"y", 2}};
    s.rows = {{Rat(-1), Rat(1)}, {Rat(4), Rat(-1)}};
    CongruenceSystem d{make_congruence("x", 3, 1), make_congruence("y", 3, 1)};
    for (auto _ : state) benchmark::DoNotOptimize(solve_with_congruences(2, 3, s, d));
}
BENCHMARK(BM_SolveMod3)->Unit(benchmark::kMicrosecond);

void BM_EvalBinequ(benchmark::State& state) {
    auto ax = binequ_axioms(2).at(0);
    EvalWindow w;
    w.height = Int(1) << state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(eval_window(ax.formula, w));
}
BENCHMARK(BM_EvalBinequ)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_EmitT(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(emit_T({2, 3}).collect());
}
BENCHMARK(BM_EmitT)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
