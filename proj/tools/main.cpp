// rico: placement optimizer and orchestration simulator for a disaggregated
// Near-RT RIC across a cloud-edge overlay.
//
// Subcommands: gen, solve, compare, simulate. Machine-readable outputs only
// (JSON / JSON lines / CSV); set RICO_LOG=info or debug for progress on
// stderr.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rico/exact.hpp"
#include "rico/heuristic.hpp"
#include "rico/json_io.hpp"
#include "rico/model.hpp"
#include "rico/orchestrator.hpp"
#include "rico/scenarios.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTimeoutNoIncumbent = 4;
constexpr int kExitSimInfeasible = 5;

int log_level() {
    const char* env = std::getenv("RICO_LOG");
    if (env == nullptr) return 0;
    const std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[rico] " << msg << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

rico::Instance load_instance(const std::string& path) {
    rico::Instance instance = rico::instance_from_json(read_file(path));
    const auto errors = rico::validate_instance(instance);
    if (!errors.empty()) {
        std::ostringstream os;
        os << "invalid instance " << path << ":";
        for (const auto& e : errors) os << "\n  " << e;
        throw std::invalid_argument(os.str());
    }
    return instance;
}

rico::HierarchicalTopologySpec load_tiers(const std::string& path) {
    if (path.empty()) return {};
    return rico::topology_spec_from_json(read_file(path));
}

double wall_seconds(Clock::time_point from) {
    return std::chrono::duration<double>(Clock::now() - from).count();
}

int count_xapp_instances(const rico::Solution& sol) {
    int n = 0;
    for (const auto& [cn, xs] : sol.xapp_on) {
        (void)cn;
        n += static_cast<int>(xs.size());
    }
    return n;
}

// --- gen -------------------------------------------------------------------

int cmd_gen(int n_cns, std::uint64_t seed, const std::string& out, const std::string& tiers) {
    rico::Instance instance;
    try {
        instance = rico::generate_hierarchical_topology(load_tiers(tiers), n_cns, seed);
    } catch (const rico::ConfigError& e) {
        std::cerr << "rico gen: " << e.what() << "\n";
        return kExitUsage;
    }
    write_file(out, rico::instance_to_json(instance) + "\n");
    log_info("wrote " + out);
    return 0;
}

// --- solve -----------------------------------------------------------------

int solve_heuristic_cmd(const rico::Instance& instance, const std::string& out, bool verbose) {
    const auto start = Clock::now();
    rico::HeuristicResult result;
    try {
        result = rico::solve_heuristic(instance);
    } catch (const rico::HeuristicInfeasibleError& e) {
        std::cout << "heuristic,,false," << rico::format_number(wall_seconds(start)) << "\n";
        std::cerr << rico::violations_to_json(e.violations) << "\n";
        return kExitInfeasible;
    }
    if (verbose) std::cerr << rico::phase_log_to_jsonl(result.log);
    const double elapsed = wall_seconds(start);
    if (!out.empty()) write_file(out, rico::solution_to_json(result.solution) + "\n");
    std::cout << "heuristic," << rico::format_number(result.solution.total_cost) << ",true,"
              << rico::format_number(elapsed) << "\n";
    return 0;
}

int solve_exact_cmd(const rico::Instance& instance, double budget, const std::string& out) {
    const auto start = Clock::now();
    rico::SolverBudget b;
    b.wall_time_limit_s = budget;
    const rico::ExactResult result = rico::solve_exact(instance, b);
    const double elapsed = wall_seconds(start);
    if (!out.empty()) write_file(out, rico::exact_result_to_json(result) + "\n");
    const bool feasible = result.best.has_value();
    std::cout << "exact," << (feasible ? rico::format_number(*result.best_cost) : "") << ","
              << (feasible ? "true" : "false") << "," << rico::format_number(elapsed) << "\n";
    if (result.status == rico::ExactStatus::Infeasible) return kExitInfeasible;
    if (result.status == rico::ExactStatus::Timeout && !feasible) return kExitTimeoutNoIncumbent;
    return 0;
}

int solve_race_cmd(const rico::Instance& instance, double budget, const std::string& out) {
    const auto start = Clock::now();
    rico::SimConfig config;
    config.exact_budget = budget;
    rico::RaceOutcome race;
    try {
        race = rico::race_solvers(instance, config);
    } catch (const rico::HeuristicInfeasibleError& e) {
        std::cout << "race,,false," << rico::format_number(wall_seconds(start)) << "\n";
        std::cerr << rico::violations_to_json(e.violations) << "\n";
        return kExitInfeasible;
    }
    const double elapsed = wall_seconds(start);
    const double h_cost = race.heuristic.solution.total_cost;
    std::cout << "heuristic," << rico::format_number(h_cost) << ",true,"
              << rico::format_number(race.heuristic_ready_s) << "\n";
    const bool exact_done = race.exact.status == rico::ExactStatus::Optimal;
    std::cout << "exact," << (exact_done ? rico::format_number(*race.exact.best_cost) : "") << ","
              << (exact_done ? "true" : "false") << ","
              << (race.exact_ready_s ? rico::format_number(*race.exact_ready_s) : "") << "\n";
    const double applied_cost = race.optimal_applied ? *race.exact.best_cost : h_cost;
    std::cout << "race," << rico::format_number(applied_cost) << ",true,"
              << rico::format_number(elapsed) << "\n";

    nlohmann::ordered_json report;
    report["applied"] = race.optimal_applied ? "exact" : "heuristic";
    report["heuristic_cost"] = h_cost;
    report["exact_status"] = rico::to_string(race.exact.status);
    if (exact_done) report["exact_cost"] = *race.exact.best_cost;
    const rico::Solution& final_sol =
        race.optimal_applied ? *race.exact.best : race.heuristic.solution;
    report["solution"] = nlohmann::ordered_json::parse(rico::solution_to_json(final_sol));
    if (!out.empty()) write_file(out, report.dump(2) + "\n");
    return 0;
}

// --- compare ---------------------------------------------------------------

int cmd_compare(std::vector<int> cns_list, std::uint64_t seed, double budget,
                const std::string& out, const std::string& tiers) {
    std::sort(cns_list.begin(), cns_list.end());
    cns_list.erase(std::unique(cns_list.begin(), cns_list.end()), cns_list.end());

    const rico::HierarchicalTopologySpec spec = load_tiers(tiers);
    std::ostringstream csv;
    csv << "n_cns,strategy,cost,elapsed_s,e2t_instances,xapp_instances,status\n";

    for (const int n : cns_list) {
        rico::Instance instance;
        try {
            instance = rico::generate_hierarchical_topology(spec, n, seed);
        } catch (const rico::ConfigError& e) {
            csv << n << ",exact,,,,," << "generation_failed\n";
            csv << n << ",heuristic,,,,," << "generation_failed\n";
            log_info(std::string("generation failed for n_cns=") + std::to_string(n) + ": " + e.what());
            continue;
        }

        {
            const auto start = Clock::now();
            rico::SolverBudget b;
            b.wall_time_limit_s = std::numeric_limits<double>::max();
            b.node_limit = rico::exact_node_budget(budget);
            const rico::ExactResult r = rico::solve_exact(instance, b);
            const double elapsed = rico::kExactSecondsPerNode * static_cast<double>(r.explored_nodes);
            log_info("exact n_cns=" + std::to_string(n) + " wall=" +
                     rico::format_number(wall_seconds(start)) + "s nodes=" +
                     std::to_string(r.explored_nodes));
            csv << n << ",exact,";
            if (r.best) {
                csv << rico::format_number(*r.best_cost) << "," << rico::format_number(elapsed) << ","
                    << r.best->e2t_on.size() << "," << count_xapp_instances(*r.best);
            } else {
                csv << "," << rico::format_number(elapsed) << ",,";
            }
            csv << ",";
            switch (r.status) {
                case rico::ExactStatus::Optimal: csv << "optimal"; break;
                case rico::ExactStatus::Timeout: csv << "timeout"; break;
                case rico::ExactStatus::Infeasible: csv << "infeasible"; break;
            }
            csv << "\n";
        }

        {
            const auto start = Clock::now();
            csv << n << ",heuristic,";
            try {
                const rico::HeuristicResult r = rico::solve_heuristic(instance);
                const double elapsed =
                    rico::kHeuristicSecondsPerProbe * static_cast<double>(r.probe_count);
                log_info("heuristic n_cns=" + std::to_string(n) + " wall=" +
                         rico::format_number(wall_seconds(start)) + "s probes=" +
                         std::to_string(r.probe_count));
                csv << rico::format_number(r.solution.total_cost) << ","
                    << rico::format_number(elapsed) << "," << r.solution.e2t_on.size() << ","
                    << count_xapp_instances(r.solution) << ",ok\n";
            } catch (const rico::HeuristicInfeasibleError&) {
                csv << ",,,,infeasible\n";
            }
        }
    }

    if (out.empty()) {
        std::cout << csv.str();
    } else {
        write_file(out, csv.str());
        log_info("wrote " + out);
    }
    return 0;
}

// --- simulate --------------------------------------------------------------

struct ScenarioParams {
    std::string e2;
    std::string cn;
    double at = -1.0; // scenario default applies when negative
    double added_ms = 10.0;
    std::optional<double> downtime;
};

int cmd_simulate(const std::string& scenario, const std::string& in, const std::string& config_path,
                 const std::string& out_dir) {
    const rico::Instance instance = load_instance(in);

    rico::SimConfig config;
    ScenarioParams params;
    std::string config_text = "{}";
    if (!config_path.empty()) {
        config_text = read_file(config_path);
        config = rico::sim_config_from_json(config_text);
        const auto j = nlohmann::json::parse(config_text);
        if (j.contains("scenario")) {
            const auto& s = j.at("scenario");
            params.e2 = s.value("e2", params.e2);
            params.cn = s.value("cn", params.cn);
            params.at = s.value("at", params.at);
            params.added_ms = s.value("added_ms", params.added_ms);
            if (s.contains("downtime") && !s.at("downtime").is_null()) {
                params.downtime = s.at("downtime").get<double>();
            }
        }
    }

    rico::FaultSchedule schedule;
    try {
        if (scenario == "spike") {
            std::string e2 = params.e2;
            if (e2.empty()) {
                std::vector<std::string> ids;
                for (const auto& n : instance.e2_nodes) ids.push_back(n.id);
                std::sort(ids.begin(), ids.end(), rico::NaturalLess{});
                e2 = ids.back();
            }
            schedule = rico::scenario_latency_spike(instance, e2, params.added_ms,
                                                    params.at < 0 ? 150.0 : params.at);
        } else if (scenario == "crash") {
            std::string cn = params.cn;
            if (cn.empty()) {
                // Default target: the first edge CN carrying loop components.
                const auto initial = rico::solve_heuristic(instance);
                for (const auto& id : initial.solution.e2t_on) {
                    const rico::ComputeNode* node = instance.find_cn(id);
                    if (node != nullptr && node->tier != 0) {
                        cn = id;
                        break;
                    }
                }
                if (cn.empty()) {
                    for (const auto& id : initial.solution.used) {
                        const rico::ComputeNode* node = instance.find_cn(id);
                        if (node != nullptr && node->tier != 0) {
                            cn = id;
                            break;
                        }
                    }
                }
                if (cn.empty()) {
                    std::cerr << "rico simulate: the initial placement uses no edge CN; "
                                 "set scenario.cn in the config\n";
                    return kExitUsage;
                }
            }
            schedule = rico::scenario_cn_crash(instance, cn, params.at < 0 ? 30.0 : params.at,
                                               params.downtime);
        } else {
            std::cerr << "rico simulate: unknown scenario " << scenario << "\n";
            return kExitUsage;
        }
    } catch (const rico::CloudCrashError& e) {
        std::cerr << "rico simulate: " << e.what() << "\n";
        return kExitUsage;
    } catch (const rico::HeuristicInfeasibleError& e) {
        std::cerr << "rico simulate: " << e.what() << "\n";
        return kExitSimInfeasible;
    }

    rico::EventTrace trace;
    try {
        trace = rico::run_simulation(instance, schedule, config);
    } catch (const rico::SimInfeasibleError& e) {
        std::cerr << "rico simulate: " << e.what() << "\n";
        return kExitSimInfeasible;
    }

    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "events.jsonl").string(), rico::events_to_jsonl(trace));
    write_file((fs::path(out_dir) / "samples.csv").string(), rico::samples_to_csv(trace));

    nlohmann::ordered_json manifest;
    manifest["instance"] = in;
    manifest["scenario"] = scenario;
    manifest["schedule"] = nlohmann::ordered_json::parse(rico::fault_schedule_to_json(schedule));
    manifest["config"] = nlohmann::ordered_json::parse(rico::sim_config_to_json(config));
    write_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");

    log_info("wrote " + out_dir + "/{events.jsonl,samples.csv,manifest.json}");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Placement optimizer and orchestration simulator for a disaggregated Near-RT RIC"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a hierarchical cloud-edge instance");
    int gen_cns = 0;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_tiers;
    gen->add_option("--cns", gen_cns, "Number of edge compute nodes")->required();
    gen->add_option("--seed", gen_seed, "RNG seed for link latencies")->required();
    gen->add_option("--out", gen_out, "Output instance JSON path")->required();
    gen->add_option("--tiers", gen_tiers, "JSON file overriding the tier table");

    // solve
    auto* solve = app.add_subcommand(
        "solve",
        "Solve one instance; prints strategy,cost,feasible,elapsed_s. The race strategy prints\n"
        "three rows (heuristic, exact, applied) whose elapsed_s columns carry the simulated\n"
        "readiness times of the solver race; single-strategy rows carry wall-clock seconds.");
    std::string solve_strategy, solve_in, solve_out;
    double solve_budget = 60.0;
    bool solve_verbose = false;
    solve->add_option("--strategy", solve_strategy, "exact | heuristic | race")
        ->required()
        ->check(CLI::IsMember({"exact", "heuristic", "race"}));
    solve->add_option("--budget", solve_budget, "Exact-solver budget in seconds (default 60)");
    solve->add_option("--in", solve_in, "Instance JSON path")->required();
    solve->add_option("--out", solve_out, "Output path (solution/result JSON)");
    solve->add_flag("--verbose", solve_verbose, "Emit the heuristic phase log as JSON lines on stderr");

    // compare
    auto* compare = app.add_subcommand(
        "compare",
        "Sweep CN counts; CSV columns n_cns,strategy,cost,elapsed_s,e2t_instances,xapp_instances,status.\n"
        "elapsed_s uses the deterministic work model (1e-5 s per search node, 1e-6 s per placement\n"
        "probe) so repeated runs are byte-identical; wall-clock goes to the RICO_LOG=info log.");
    std::vector<int> compare_cns;
    std::uint64_t compare_seed = 1;
    double compare_budget = 60.0;
    std::string compare_out, compare_tiers;
    compare->add_option("--cns-list", compare_cns, "Comma-separated CN counts")
        ->required()
        ->delimiter(',');
    compare->add_option("--seed", compare_seed, "Topology seed")->required();
    compare->add_option("--budget", compare_budget,
                        "Per-point exact budget in deterministic seconds (default 60)");
    compare->add_option("--out", compare_out, "CSV output path (stdout when absent)");
    compare->add_option("--tiers", compare_tiers, "JSON file overriding the tier table");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a fault scenario through the orchestration cycle");
    std::string sim_scenario, sim_in, sim_config, sim_out_dir;
    simulate->add_option("--scenario", sim_scenario, "spike | crash")
        ->required()
        ->check(CLI::IsMember({"spike", "crash"}));
    simulate->add_option("--in", sim_in, "Instance JSON path")->required();
    simulate->add_option("--config", sim_config, "SimConfig JSON (may carry a scenario{} block)");
    simulate->add_option("--out-dir", sim_out_dir, "Directory for events.jsonl, samples.csv, manifest.json")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_cns, gen_seed, gen_out, gen_tiers);
        if (solve->parsed()) {
            const rico::Instance instance = load_instance(solve_in);
            if (solve_strategy == "heuristic") return solve_heuristic_cmd(instance, solve_out, solve_verbose);
            if (solve_strategy == "exact") return solve_exact_cmd(instance, solve_budget, solve_out);
            return solve_race_cmd(instance, solve_budget, solve_out);
        }
        if (compare->parsed()) {
            if (compare_cns.empty()) {
                std::cerr << "rico compare: --cns-list must not be empty\n";
                return kExitUsage;
            }
            return cmd_compare(compare_cns, compare_seed, compare_budget, compare_out, compare_tiers);
        }
        if (simulate->parsed()) return cmd_simulate(sim_scenario, sim_in, sim_config, sim_out_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "rico: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "rico: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
