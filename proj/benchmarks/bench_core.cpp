#include <benchmark/benchmark.h>

#include "qdx/backlund.hpp"
#include "qdx/linsys.hpp"
#include "qdx/qlattice.hpp"

using namespace qdx;

namespace {

QGrid make_grid(std::size_t depth) {
    // q chosen deep enough that base * q^depth stays normal at 4096
    return QGrid(1.0, depth > 1024 ? 0.9 : 0.5, depth);
}

void BM_QIntegralPartial(benchmark::State& state) {
    QGrid g = make_grid(static_cast<std::size_t>(state.range(0)));
    LatticeFn f = LatticeFn::sample(g, [](double x) { return 1.0 + 0.5 * x; });
    for (auto _ : state)
        benchmark::DoNotOptimize(q_integral_partial(f, 1e-3));
}
BENCHMARK(BM_QIntegralPartial)->Arg(256)->Arg(1024)->Arg(4096);

void BM_ResolventProduct(benchmark::State& state) {
    QGrid g = make_grid(static_cast<std::size_t>(state.range(0)));
    PotentialQuad p(LatticeFn::sample(g, [](double x) { return 0.1 + 0.05 * x; }),
                    LatticeFn::constant(g, 1.0), LatticeFn::constant(g, 0.0),
                    LatticeFn::constant(g, 0.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(resolvent_product(p, 0, g.depth()));
}
BENCHMARK(BM_ResolventProduct)->Arg(256)->Arg(1024)->Arg(4096);

void BM_BacklundOrbit(benchmark::State& state) {
    SeedSolution seed =
        power_law_family(1.0, 1.0, make_grid(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(backlund_plus(seed, 0.4, 1e-3));
}
BENCHMARK(BM_BacklundOrbit)->Arg(256)->Arg(1024)->Arg(4096);

void BM_DeformChain(benchmark::State& state) {
    SeedSolution seed = power_law_family(1.0, 1.0, make_grid(256));
    std::vector<double> params(static_cast<std::size_t>(state.range(0)), 0.2);
    for (auto _ : state)
        benchmark::DoNotOptimize(deform_chain({seed, params}, 1e-3));
}
BENCHMARK(BM_DeformChain)->Arg(1)->Arg(4)->Arg(16);

void BM_Propagate(benchmark::State& state) {
    QGrid g = make_grid(static_cast<std::size_t>(state.range(0)));
    PotentialQuad p(LatticeFn::sample(g, [](double x) { return 0.1 * x; }),
                    LatticeFn::constant(g, 1.0),
                    LatticeFn::sample(g, [](double x) { return 0.2 * x; }),
                    LatticeFn::constant(g, 0.5));
    for (auto _ : state)
        benchmark::DoNotOptimize(propagate(p, 1.0, 0.3));
}
BENCHMARK(BM_Propagate)->Arg(256)->Arg(4096);

} // namespace

BENCHMARK_MAIN();
