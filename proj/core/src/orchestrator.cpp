#include "rico/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace rico {

namespace {

constexpr double kTimeEps = 1e-9;

struct Action {
    enum class Kind {
        MetricTick,
        ApplyFault,
        ClearLatencyDelta,
        CnUp,
        HeuristicReady,
        ExactReady,
        RedeployStart,
        RedeployFinish,
    };

    double time = 0.0;
    long long seq = 0;
    Kind kind = Kind::MetricTick;

    std::optional<TimedFault> fault;
    std::optional<LatencyDelta> delta;
    std::string cn;
    int race_id = -1;
    std::optional<Solution> solution;
    double cost = 0.0;
    std::optional<ExactResult> exact;
};

struct ActionLater {
    bool operator()(const Action& a, const Action& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

class Simulator {
public:
    Simulator(const Instance& instance, const FaultSchedule& faults, const SimConfig& config)
        : base_(instance), config_(config) {
        validate(faults);
        eval_instance_ = base_;
        for (const auto& e2 : base_.e2_nodes) e2_order_.push_back(e2.id);
        std::sort(e2_order_.begin(), e2_order_.end(), NaturalLess{});
        for (const auto& cn : base_.compute_nodes) live_.cn_available[cn.id] = true;
        live_.effective = base_.graph;
        for (const auto& f : faults.faults) {
            Action a;
            a.time = f.time_s;
            a.kind = Action::Kind::ApplyFault;
            a.fault = f;
            push(std::move(a));
        }
    }

    EventTrace run() {
        deploy_initial();
        schedule_tick(0.0);
        while (!queue_.empty()) {
            Action a = queue_.top();
            queue_.pop();
            if (a.time > config_.sim_horizon + kTimeEps) break;
            now_ = a.time;
            dispatch(a);
        }
        return std::move(trace_);
    }

private:
    void validate(const FaultSchedule& faults) const {
        if (config_.monitor_period <= 0 || config_.latency_persistence_window <= 0 ||
            config_.node_down_timeout <= 0 || config_.heuristic_solver_delay <= 0 ||
            config_.redeploy_duration <= 0 || config_.sim_horizon <= 0 || config_.exact_budget <= 0) {
            throw std::invalid_argument("all SimConfig durations must be > 0");
        }
        for (const auto& f : faults.faults) {
            if (f.time_s < 0 || f.time_s > config_.sim_horizon) {
                throw std::invalid_argument("fault time outside the simulation horizon");
            }
        }
    }

    void push(Action a) {
        a.seq = next_seq_++;
        queue_.push(std::move(a));
    }

    SimEvent& emit(SimEventKind kind) {
        SimEvent ev;
        ev.time = now_;
        ev.kind = kind;
        trace_.events.push_back(std::move(ev));
        return trace_.events.back();
    }

    void deploy_initial() {
        now_ = 0.0;
        auto& started = emit(SimEventKind::SolverStarted);
        started.strategy = "heuristic";
        HeuristicResult initial;
        try {
            initial = solve_heuristic(base_);
        } catch (const HeuristicInfeasibleError& e) {
            throw SimInfeasibleError(std::string("no feasible initial placement: ") + e.what());
        }
        live_.current = initial.solution;
        auto& found = emit(SimEventKind::HeuristicSolution);
        found.cost = initial.solution.total_cost;
        found.solution_hash = initial.solution.hash();
        auto& done = emit(SimEventKind::RedeployFinished);
        done.solution_hash = initial.solution.hash();
    }

    void schedule_tick(double t) {
        if (t > config_.sim_horizon + kTimeEps) return;
        Action a;
        a.time = t;
        a.kind = Action::Kind::MetricTick;
        push(std::move(a));
    }

    void dispatch(const Action& a) {
        switch (a.kind) {
            case Action::Kind::MetricTick: on_tick(); break;
            case Action::Kind::ApplyFault: on_fault(*a.fault); break;
            case Action::Kind::ClearLatencyDelta: apply_delta(*a.delta, -1.0); break;
            case Action::Kind::CnUp: on_cn_up(a.cn); break;
            case Action::Kind::HeuristicReady: on_heuristic_ready(a); break;
            case Action::Kind::ExactReady: on_exact_ready(a); break;
            case Action::Kind::RedeployStart: on_redeploy_start(a); break;
            case Action::Kind::RedeployFinish: on_redeploy_finish(a); break;
        }
    }

    bool available(const std::string& cn) const {
        auto it = live_.cn_available.find(cn);
        return it == live_.cn_available.end() || it->second;
    }

    bool pair_measurable(const std::string& e2, const std::string& xapp) const {
        for (const auto& host : loop_hosts(eval_instance_, live_.current, e2, xapp)) {
            if (!available(host)) return false;
        }
        return true;
    }

    void on_tick() {
        double max_lat = std::numeric_limits<double>::quiet_NaN();
        int measured = 0;
        int violated = 0;
        bool any_violation = false;
        for (const auto& e2 : e2_order_) {
            for (const auto& xa : base_.xapps) {
                const auto key = std::make_pair(e2, xa.id);
                if (!pair_measurable(e2, xa.id)) {
                    run_start_.erase(key);
                    fired_.erase(key);
                    continue;
                }
                const double lat = control_loop_latency(eval_instance_, live_.current, e2, xa.id);
                trace_.samples.push_back({now_, e2, xa.id, lat});
                auto& series = live_.series[key];
                series.points.emplace_back(now_, lat);
                const double keep_from = now_ - config_.latency_persistence_window - 1.0;
                while (!series.points.empty() && series.points.front().first < keep_from) {
                    series.points.pop_front();
                }
                ++measured;
                if (std::isnan(max_lat) || lat > max_lat) max_lat = lat;
                if (lat > xa.rho_ms) {
                    ++violated;
                    any_violation = true;
                    if (!run_start_.count(key)) {
                        run_start_[key] = now_;
                        auto& ev = emit(SimEventKind::ControlLoopViolation);
                        ev.e2 = e2;
                        ev.xapp = xa.id;
                        ev.measured = lat;
                        ev.limit = xa.rho_ms;
                    }
                } else {
                    run_start_.erase(key);
                    fired_.erase(key);
                }
            }
        }
        auto& sample = emit(SimEventKind::MetricSample);
        if (!std::isnan(max_lat)) sample.measured = max_lat;
        sample.detail = "measured=" + std::to_string(measured) + " violated=" + std::to_string(violated);

        // unreported firings become one optimization trigger
        std::vector<TriggerFiring> firing = evaluate_triggers(base_, live_, now_, config_);
        std::vector<TriggerFiring> fresh;
        for (const auto& f : firing) {
            if (f.kind == TriggerFiring::Kind::NodeDown) {
                if (node_reported_.count(f.cn)) continue;
                node_reported_.insert(f.cn);
                auto& ev = emit(SimEventKind::NodeDownDetected);
                ev.cn = f.cn;
                fresh.push_back(f);
            } else {
                const auto key = std::make_pair(f.e2, f.xapp);
                if (fired_.count(key)) continue;
                fired_.insert(key);
                fresh.push_back(f);
            }
        }
        if (!fresh.empty()) {
            auto& ev = emit(SimEventKind::OptimizationTrigger);
            const TriggerFiring& first = fresh.front();
            if (first.kind == TriggerFiring::Kind::NodeDown) {
                ev.cn = first.cn;
                ev.detail = "node_down";
            } else {
                ev.e2 = first.e2;
                ev.xapp = first.xapp;
                ev.detail = "latency";
            }
            start_race();
        }

        if (awaiting_satisfied_ && !any_violation) {
            auto& ev = emit(SimEventKind::LoopSatisfied);
            if (!std::isnan(max_lat)) ev.measured = max_lat;
            awaiting_satisfied_ = false;
        }

        schedule_tick(now_ + config_.monitor_period);
    }

    void apply_delta(const LatencyDelta& delta, double sign) {
        const double old = live_.effective.latency(delta.node_a, delta.node_b);
        live_.effective.set_latency(delta.node_a, delta.node_b, old + sign * delta.added_ms);
        eval_instance_.graph = live_.effective;
    }

    void on_fault(const TimedFault& fault) {
        if (std::holds_alternative<LatencyDelta>(fault.fault)) {
            const auto& delta = std::get<LatencyDelta>(fault.fault);
            apply_delta(delta, 1.0);
            auto& ev = emit(SimEventKind::FaultInjected);
            ev.detail = "latency_delta";
            ev.e2 = delta.node_a;
            ev.cn = delta.node_b;
            ev.measured = delta.added_ms;
            if (delta.duration_s) {
                Action clear;
                clear.time = fault.time_s + *delta.duration_s;
                clear.kind = Action::Kind::ClearLatencyDelta;
                clear.delta = delta;
                push(std::move(clear));
            }
        } else {
            const auto& crash = std::get<CnCrash>(fault.fault);
            live_.cn_available[crash.cn] = false;
            live_.down_since[crash.cn] = fault.time_s;
            auto& ev = emit(SimEventKind::FaultInjected);
            ev.detail = "cn_crash";
            ev.cn = crash.cn;
            if (crash.downtime_s) {
                Action up;
                up.time = fault.time_s + *crash.downtime_s;
                up.kind = Action::Kind::CnUp;
                up.cn = crash.cn;
                push(std::move(up));
            }
        }
    }

    void on_cn_up(const std::string& cn) {
        live_.cn_available[cn] = true;
        live_.down_since.erase(cn);
        node_reported_.erase(cn);
    }

    Instance solver_snapshot() const {
        Instance snap = eval_instance_;
        snap.compute_nodes.clear();
        for (const auto& cn : eval_instance_.compute_nodes) {
            if (available(cn.id)) snap.compute_nodes.push_back(cn);
        }
        return snap;
    }

    void start_race() {
        const int race_id = ++race_counter_;
        active_race_ = race_id;

        auto& hs = emit(SimEventKind::SolverStarted);
        hs.strategy = "heuristic";
        auto& es = emit(SimEventKind::SolverStarted);
        es.strategy = "exact";

        const Instance snapshot = solver_snapshot();
        HeuristicResult heuristic;
        try {
            heuristic = solve_heuristic(snapshot);
        } catch (const HeuristicInfeasibleError& e) {
            throw SimInfeasibleError(std::string("re-optimization found no feasible placement: ") +
                                     e.what());
        }
        race_heuristic_cost_ = heuristic.solution.total_cost;

        Action hr;
        hr.time = now_ + config_.heuristic_solver_delay;
        hr.kind = Action::Kind::HeuristicReady;
        hr.race_id = race_id;
        hr.cost = heuristic.solution.total_cost;
        hr.solution = std::move(heuristic.solution);
        push(std::move(hr));

        SolverBudget budget;
        budget.wall_time_limit_s = std::numeric_limits<double>::max();
        budget.node_limit = exact_node_budget(config_.exact_budget);
        ExactResult exact = solve_exact(snapshot, budget);
        if (exact.status == ExactStatus::Optimal) {
            // The deployer applies the quick heuristic first; an optimum that
            // lands earlier waits for that decision point.
            const double solved = kExactSecondsPerNode * static_cast<double>(exact.explored_nodes);
            Action er;
            er.time = now_ + std::max(solved, config_.heuristic_solver_delay);
            er.kind = Action::Kind::ExactReady;
            er.race_id = race_id;
            er.exact = std::move(exact);
            push(std::move(er));
        }
        // A timed-out or infeasible exact run is simply never applied.
    }

    void on_heuristic_ready(const Action& a) {
        if (a.race_id != active_race_) return; // superseded by a newer trigger
        auto& ev = emit(SimEventKind::HeuristicSolution);
        ev.cost = a.cost;
        ev.solution_hash = a.solution->hash();
        if (a.solution->same_assignment(live_.current)) return; // nothing to redeploy
        schedule_redeploy(*a.solution, a.cost);
    }

    void on_exact_ready(const Action& a) {
        if (a.race_id != active_race_) return; // cancelled: a newer trigger superseded it
        const ExactResult& exact = *a.exact;
        const Solution& best = *exact.best;
        const bool cheaper = *exact.best_cost < race_heuristic_cost_;
        const bool identical = best.same_assignment(live_.current) ||
                               (redeploy_in_flight_ && pending_current_ &&
                                best.same_assignment(*pending_current_));
        auto& ev = emit(SimEventKind::OptimalSolution);
        ev.cost = *exact.best_cost;
        ev.solution_hash = best.hash();
        ev.applied = cheaper && !identical;
        if (cheaper && !identical) {
            schedule_redeploy(best, *exact.best_cost);
        }
    }

    void schedule_redeploy(const Solution& solution, double cost) {
        if (redeploy_in_flight_) {
            queued_redeploy_ = {solution, cost};
            return;
        }
        begin_redeploy(solution, cost);
    }

    void begin_redeploy(const Solution& solution, double cost) {
        redeploy_in_flight_ = true;
        pending_current_ = solution;
        auto& ev = emit(SimEventKind::RedeployStarted);
        ev.cost = cost;
        ev.solution_hash = solution.hash();
        Action fin;
        fin.time = now_ + config_.redeploy_duration;
        fin.kind = Action::Kind::RedeployFinish;
        fin.solution = solution;
        fin.cost = cost;
        push(std::move(fin));
    }

    void on_redeploy_start(const Action& a) { begin_redeploy(*a.solution, a.cost); }

    void on_redeploy_finish(const Action& a) {
        live_.current = *a.solution;
        live_.current.rederive(base_);
        redeploy_in_flight_ = false;
        pending_current_.reset();
        auto& ev = emit(SimEventKind::RedeployFinished);
        ev.solution_hash = a.solution->hash();
        awaiting_satisfied_ = true;
        if (queued_redeploy_) {
            auto [sol, cost] = std::move(*queued_redeploy_);
            queued_redeploy_.reset();
            begin_redeploy(sol, cost);
        }
    }

    Instance base_;
    SimConfig config_;
    Instance eval_instance_; // base with the effective latency matrix

    std::vector<std::string> e2_order_;
    LiveState live_;
    EventTrace trace_;

    std::priority_queue<Action, std::vector<Action>, ActionLater> queue_;
    long long next_seq_ = 0;
    double now_ = 0.0;

    std::map<std::pair<std::string, std::string>, double> run_start_;
    std::set<std::pair<std::string, std::string>> fired_;
    IdSet node_reported_;

    int race_counter_ = 0;
    int active_race_ = -1;
    double race_heuristic_cost_ = 0.0;

    bool redeploy_in_flight_ = false;
    std::optional<Solution> pending_current_;
    std::optional<std::pair<Solution, double>> queued_redeploy_;
    bool awaiting_satisfied_ = false;
};

} // namespace

std::string to_string(SimEventKind kind) {
    switch (kind) {
        case SimEventKind::MetricSample: return "MetricSample";
        case SimEventKind::ControlLoopViolation: return "ControlLoopViolation";
        case SimEventKind::NodeDownDetected: return "NodeDownDetected";
        case SimEventKind::OptimizationTrigger: return "OptimizationTrigger";
        case SimEventKind::SolverStarted: return "SolverStarted";
        case SimEventKind::HeuristicSolution: return "HeuristicSolution";
        case SimEventKind::OptimalSolution: return "OptimalSolution";
        case SimEventKind::RedeployStarted: return "RedeployStarted";
        case SimEventKind::RedeployFinished: return "RedeployFinished";
        case SimEventKind::LoopSatisfied: return "LoopSatisfied";
        case SimEventKind::FaultInjected: return "FaultInjected";
    }
    return "?";
}

std::vector<TriggerFiring> evaluate_triggers(const Instance& instance, const LiveState& state,
                                             double now, const SimConfig& config) {
    std::vector<TriggerFiring> firings;

    std::vector<std::string> cn_ids;
    for (const auto& cn : instance.compute_nodes) cn_ids.push_back(cn.id);
    std::sort(cn_ids.begin(), cn_ids.end(), NaturalLess{});
    for (const auto& cn : cn_ids) {
        auto it = state.down_since.find(cn);
        if (it != state.down_since.end() && now - it->second >= config.node_down_timeout - kTimeEps) {
            TriggerFiring f;
            f.kind = TriggerFiring::Kind::NodeDown;
            f.cn = cn;
            firings.push_back(std::move(f));
        }
    }

    std::vector<std::string> e2_ids;
    for (const auto& e2 : instance.e2_nodes) e2_ids.push_back(e2.id);
    std::sort(e2_ids.begin(), e2_ids.end(), NaturalLess{});
    const double window = config.latency_persistence_window;
    for (const auto& e2 : e2_ids) {
        for (const auto& xa : instance.xapps) {
            auto it = state.series.find(std::make_pair(e2, xa.id));
            if (it == state.series.end() || it->second.points.empty()) continue;
            bool all_bad = true;
            bool covered = false;
            bool any = false;
            for (const auto& [t, lat] : it->second.points) {
                if (t < now - window - kTimeEps || t > now + kTimeEps) continue;
                any = true;
                if (lat <= xa.rho_ms) {
                    all_bad = false;
                    break;
                }
                if (t <= now - window + kTimeEps) covered = true;
            }
            if (any && all_bad && covered) {
                TriggerFiring f;
                f.kind = TriggerFiring::Kind::Latency;
                f.e2 = e2;
                f.xapp = xa.id;
                firings.push_back(std::move(f));
            }
        }
    }
    return firings;
}

RaceOutcome race_solvers(const Instance& instance, const SimConfig& config) {
    RaceOutcome out;
    out.heuristic = solve_heuristic(instance); // propagates HeuristicInfeasibleError
    out.heuristic_ready_s = config.heuristic_solver_delay;
    out.applied = out.heuristic.solution;

    SolverBudget budget;
    budget.wall_time_limit_s = std::numeric_limits<double>::max();
    budget.node_limit = exact_node_budget(config.exact_budget);
    out.exact = solve_exact(instance, budget);

    if (out.exact.status == ExactStatus::Optimal) {
        out.exact_ready_s = kExactSecondsPerNode * static_cast<double>(out.exact.explored_nodes);
        if (*out.exact.best_cost < out.heuristic.solution.total_cost) {
            out.optimal_applied = true;
        } else {
            out.late_optimal = *out.exact.best;
        }
    }
    return out;
}

EventTrace run_simulation(const Instance& instance, const FaultSchedule& faults,
                          const SimConfig& config) {
    Simulator sim(instance, faults, config);
    return sim.run();
}

} // namespace rico
