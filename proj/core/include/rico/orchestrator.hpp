#ifndef RICO_ORCHESTRATOR_HPP
#define RICO_ORCHESTRATOR_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rico/exact.hpp"
#include "rico/heuristic.hpp"
#include "rico/model.hpp"
#include "rico/scenarios.hpp"

namespace rico {

// Deterministic work-to-time model: solver effort converts to simulated (and
// reported) seconds at fixed rates, so traces and sweep outputs are
// byte-reproducible. Wall-clock timings, when wanted, go to the log.
inline constexpr double kExactSecondsPerNode = 1e-5;
inline constexpr double kHeuristicSecondsPerProbe = 1e-6;

inline long long exact_node_budget(double seconds) {
    return static_cast<long long>(seconds / kExactSecondsPerNode);
}

struct SimConfig {
    double monitor_period = 1.0;
    double latency_persistence_window = 10.0;
    double node_down_timeout = 50.0; // worker-node unavailability detection
    double heuristic_solver_delay = 5.0;
    double redeploy_duration = 35.0;
    double sim_horizon = 300.0;
    std::uint64_t rng_seed = 1;
    double exact_budget = 60.0; // simulated seconds granted to the exact solver
};

enum class SimEventKind {
    MetricSample,
    ControlLoopViolation,
    NodeDownDetected,
    OptimizationTrigger,
    SolverStarted,
    HeuristicSolution,
    OptimalSolution,
    RedeployStarted,
    RedeployFinished,
    LoopSatisfied,
    FaultInjected,
};

std::string to_string(SimEventKind kind);

// Trace event. Only the fields meaningful for the kind are set; unset
// numeric fields stay NaN and are skipped when serialized.
struct SimEvent {
    double time = 0.0;
    SimEventKind kind = SimEventKind::MetricSample;
    std::string e2;
    std::string xapp;
    std::string cn;
    std::string strategy;
    std::string detail;
    double measured = std::numeric_limits<double>::quiet_NaN();
    double limit = std::numeric_limits<double>::quiet_NaN();
    double cost = std::numeric_limits<double>::quiet_NaN();
    std::optional<std::uint64_t> solution_hash;
    std::optional<bool> applied;
};

struct LoopSample {
    double time = 0.0;
    std::string e2;
    std::string xapp;
    double latency_ms = 0.0;
};

// Trace plus the per-loop measurement series it was derived from. Events
// serialize to JSON lines, samples to CSV.
struct EventTrace {
    std::vector<SimEvent> events;
    std::vector<LoopSample> samples;
};

// Monitoring view the trigger rules evaluate against.
struct LiveState {
    Solution current;
    IdMap<bool> cn_available;
    OverlayGraph effective; // base latencies plus active fault deltas

    struct Series {
        // (time, latency); loops traversing a down CN produce no point.
        std::deque<std::pair<double, double>> points;
    };
    std::map<std::pair<std::string, std::string>, Series> series;
    IdMap<double> down_since;
};

struct TriggerFiring {
    enum class Kind { Latency, NodeDown };
    Kind kind = Kind::Latency;
    std::string e2;
    std::string xapp;
    std::string cn;
};

// Alert rules: a latency trigger fires for (e2, xapp) when every sample in
// the trailing persistence window exceeded the threshold and the window is
// fully covered; a node-down trigger fires when a CN has been unavailable
// for at least node_down_timeout. Level semantics: the caller decides how
// often to act on a firing.
std::vector<TriggerFiring> evaluate_triggers(const Instance& instance, const LiveState& state,
                                             double now, const SimConfig& config);

struct RaceOutcome {
    HeuristicResult heuristic;
    double heuristic_ready_s = 0.0; // simulated delay until the heuristic lands
    ExactResult exact;
    std::optional<double> exact_ready_s; // absent when the budget ran out
    bool optimal_applied = false;        // strictly cheaper and in time
    Solution applied;                    // what the deployer installs first
    std::optional<Solution> late_optimal; // finished but not applied
};

// Runs both strategies on the same snapshot. The heuristic result is applied
// after heuristic_solver_delay; the exact result is applied as a second
// redeploy only when it finishes within its budget and is strictly cheaper.
// Propagates HeuristicInfeasibleError.
RaceOutcome race_solvers(const Instance& instance, const SimConfig& config);

// Full cycle: deploy the initial heuristic placement at t=0, sample every
// loop each monitor period, fire persistence-filtered triggers, race the
// solvers on the post-fault snapshot, and apply redeploys atomically after
// redeploy_duration. Fully deterministic for a given (instance, faults,
// config). Throws SimInfeasibleError when no feasible post-fault placement
// exists.
EventTrace run_simulation(const Instance& instance, const FaultSchedule& faults,
                          const SimConfig& config);

} // namespace rico

#endif
