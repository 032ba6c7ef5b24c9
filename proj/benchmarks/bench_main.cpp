#include <benchmark/benchmark.h>

#include <aoii/aoii.hpp>

using namespace aoii;

namespace {

void BM_EvalState(benchmark::State& state) {
    const Preset p = preset_source("q3");
    const long tau = state.range(0);
    for (auto _ : state) {
        auto params = eval_state(p.source, 0.8, 4, tau, p.penalties[4]);
        benchmark::DoNotOptimize(params.age_cost);
    }
}
BENCHMARK(BM_EvalState)->Arg(0)->Arg(10)->Arg(50);

void BM_ExpectedPenaltySum(benchmark::State& state) {
    const Preset p = preset_source("q3");
    const DrPh law = CycleChain::build(p.source, 0.8, 4, state.range(0)).conditional_duration();
    for (auto _ : state) {
        benchmark::DoNotOptimize(expected_penalty_sum(law, p.penalties[4]));
    }
}
BENCHMARK(BM_ExpectedPenaltySum)->Arg(0)->Arg(20);

void BM_PolicyIteration(benchmark::State& state) {
    const Preset p = preset_source("q3");
    for (auto _ : state) {
        // fresh model each round so the (j, tau) cache starts cold
        SmdpModel model(p.source, 0.8, p.penalties);
        auto out = policy_iteration(model, 10.0, state.range(0));
        benchmark::DoNotOptimize(out.eta);
    }
}
BENCHMARK(BM_PolicyIteration)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveSearch(benchmark::State& state) {
    const Preset p = preset_source("q1");
    SmdpModel model(p.source, 0.8, p.penalties);
    model.average_cost({0, 0}, 70.0); // warm the parameter cache
    for (auto _ : state) {
        auto out = exhaustive_search(model, 70.0, state.range(0));
        benchmark::DoNotOptimize(out.second);
    }
}
BENCHMARK(BM_ExhaustiveSearch)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SimulateSlots(benchmark::State& state) {
    const Preset p = preset_source("q2");
    SimConfig cfg;
    cfg.slots = state.range(0);
    cfg.replications = 1;
    cfg.warmup = 0;
    cfg.seed = 1;
    cfg.policy = PolicySpec::multi({1, 2, 3});
    for (auto _ : state) {
        auto stats = simulate(p.source, 0.8, p.penalties, 10.0, cfg);
        benchmark::DoNotOptimize(stats.mean_cost);
    }
    state.SetItemsProcessed(state.iterations() * cfg.slots);
}
BENCHMARK(BM_SimulateSlots)->Arg(100000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
