#include "fixtures.hpp"

#include "lrce/equilibrium.hpp"
#include "lrce/simulation.hpp"
#include "lrce/value.hpp"
#include "lrce/welfare.hpp"

#include <benchmark/benchmark.h>

using namespace lrce;

namespace {

DiscretizedModel grid(benchmark::State& state) {
    return discretize(testing::baseline_industry(), static_cast<Index>(state.range(0)));
}

void BM_ValueIteration(benchmark::State& state) {
    const DiscretizedModel d = grid(state);
    for (auto _ : state) benchmark::DoNotOptimize(value_optimal(1.9, d, d.firm_survival()));
}
BENCHMARK(BM_ValueIteration)->Arg(101)->Arg(201)->Arg(401);

void BM_EntrantWeights(benchmark::State& state) {
    const DiscretizedModel d = grid(state);
    const Threshold m{0.45 * static_cast<double>(d.cells())};
    for (auto _ : state) benchmark::DoNotOptimize(lambda_entry(m, d.firm_survival(), d));
}
BENCHMARK(BM_EntrantWeights)->Arg(101)->Arg(201)->Arg(401)->Arg(801);

void BM_SolveEquilibrium(benchmark::State& state) {
    const DiscretizedModel d = grid(state);
    SolverOptions opt;
    opt.cross_checks = false;
    for (auto _ : state) benchmark::DoNotOptimize(solve_lrce(d, opt));
}
BENCHMARK(BM_SolveEquilibrium)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_Compare(benchmark::State& state) {
    const DiscretizedModel d = grid(state);
    for (auto _ : state) benchmark::DoNotOptimize(compare(d));
}
BENCHMARK(BM_Compare)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_SimulatePanel(benchmark::State& state) {
    const DiscretizedModel d = discretize(testing::baseline_industry(), 201);
    SolverOptions opt;
    opt.cross_checks = false;
    const LrceSolution s = solve_lrce(d, opt);
    SimConfig cfg;
    cfg.entrants_per_period = state.range(0);
    cfg.periods = 500;
    cfg.price = s.price;
    cfg.threshold = s.threshold;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_panel(cfg, d));
    state.SetItemsProcessed(state.iterations() * cfg.entrants_per_period * cfg.periods);
}
BENCHMARK(BM_SimulatePanel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
