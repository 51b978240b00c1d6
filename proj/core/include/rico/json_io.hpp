#ifndef RICO_JSON_IO_HPP
#define RICO_JSON_IO_HPP

#include <string>
#include <vector>

#include "rico/exact.hpp"
#include "rico/heuristic.hpp"
#include "rico/model.hpp"
#include "rico/orchestrator.hpp"
#include "rico/scenarios.hpp"

namespace rico {

// Instance schema: top-level keys graph {node_order, latency (row-major)},
// compute_nodes, e2_nodes, demands {ricman,e2t,sdl,nib}, xapps,
// round_trip_factor. Capacities are numbers or the string "unbounded".
std::string instance_to_json(const Instance& instance, int indent = 2);
Instance instance_from_json(const std::string& text);

std::string solution_to_json(const Solution& solution, int indent = 2);
// Parses the raw assignment and rederives indicators and costs.
Solution solution_from_json(const std::string& text, const Instance& instance);

std::string exact_result_to_json(const ExactResult& result, int indent = 2);

std::string violations_to_json(const std::vector<Violation>& violations, int indent = 2);

std::string sim_config_to_json(const SimConfig& config, int indent = 2);
SimConfig sim_config_from_json(const std::string& text);

std::string fault_schedule_to_json(const FaultSchedule& schedule, int indent = 2);
FaultSchedule fault_schedule_from_json(const std::string& text);

// Tier table overrides; absent keys keep the built-in defaults.
HierarchicalTopologySpec topology_spec_from_json(const std::string& text);
std::string topology_spec_to_json(const HierarchicalTopologySpec& spec, int indent = 2);

// One event per line: {"t", "event", then the fields the kind carries}.
std::string events_to_jsonl(const EventTrace& trace);
// Columns: time,e2,xapp,loop_latency_ms
std::string samples_to_csv(const EventTrace& trace);

std::string phase_log_to_jsonl(const std::vector<PhaseLogEntry>& log);

// Shortest round-trip decimal form, deterministic across runs.
std::string format_number(double v);

} // namespace rico

#endif
