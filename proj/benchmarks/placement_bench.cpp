#include <benchmark/benchmark.h>

#include "rico/exact.hpp"
#include "rico/heuristic.hpp"
#include "rico/model.hpp"
#include "rico/scenarios.hpp"

namespace {

using namespace rico;

Instance topology(int n_cns) {
    return generate_hierarchical_topology({}, n_cns, 7);
}

// Segment-sum loop evaluation keeps every CN count feasible, so sweeps can
// cover sparse deployments too.
Instance relaxed_topology(int n_cns) {
    HierarchicalTopologySpec spec;
    spec.round_trip_factor = 1.0;
    return generate_hierarchical_topology(spec, n_cns, 7);
}

Instance small_topology(int n_cns) {
    HierarchicalTopologySpec spec;
    spec.tiers[0].e2_count = 1;
    spec.tiers[1].e2_count = 2;
    spec.tiers[2].e2_count = 5;
    return generate_hierarchical_topology(spec, n_cns, 7);
}

void BM_GenerateTopology(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(topology(static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_GenerateTopology)->Arg(16)->Arg(128)->Arg(512);

void BM_ControlLoopLatency(benchmark::State& state) {
    const Instance in = small_topology(4);
    const Solution sol = solve_heuristic(in).solution;
    for (auto _ : state) {
        for (const auto& e2 : in.e2_nodes) {
            for (const auto& xa : in.xapps) {
                benchmark::DoNotOptimize(control_loop_latency(in, sol, e2.id, xa.id));
            }
        }
    }
}
BENCHMARK(BM_ControlLoopLatency);

void BM_CheckFeasible(benchmark::State& state) {
    const Instance in = relaxed_topology(static_cast<int>(state.range(0)));
    const Solution sol = solve_heuristic(in).solution;
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_feasible(in, sol));
    }
}
BENCHMARK(BM_CheckFeasible)->Arg(16)->Arg(128);

void BM_SolveHeuristicRelaxed(benchmark::State& state) {
    const Instance in = relaxed_topology(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_heuristic(in));
    }
}
BENCHMARK(BM_SolveHeuristicRelaxed)->Unit(benchmark::kMillisecond)->Arg(16)->Arg(128)->Arg(512);

void BM_SolveHeuristicDense(benchmark::State& state) {
    const Instance in = topology(512);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_heuristic(in));
    }
}
BENCHMARK(BM_SolveHeuristicDense)->Unit(benchmark::kMillisecond);

void BM_SolveExactSmall(benchmark::State& state) {
    const Instance in = small_topology(static_cast<int>(state.range(0)));
    SolverBudget budget;
    budget.wall_time_limit_s = 600.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_exact(in, budget));
    }
}
BENCHMARK(BM_SolveExactSmall)->Unit(benchmark::kMillisecond)->Arg(3)->Arg(5);

} // namespace

BENCHMARK_MAIN();
