#ifndef RICO_SCENARIOS_HPP
#define RICO_SCENARIOS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rico/model.hpp"

namespace rico {

// Parameters of one edge tier of the hierarchical evaluation topology.
struct TierSpec {
    int e2_count = 0;
    double cn_fixed_cost = 0.0;
    double var_ricman_e2t = 0.0; // shared by RIC_Man and E2T
    double var_sdl_nib = 0.0;    // shared by SDL/STSL and NIBs
    double var_xapp = 0.0;
    double proc = 0.0;
    double mem = 0.0;
    double sto = 0.0;
};

struct CloudSpec {
    double fixed_cost = 0.0;
    double var_ricman = 2.0;
    double var_e2t = 2.0;
    double var_sdl = 1.0;
    double var_nib = 1.0;
    double var_xapp = 1.0;
};

// Full generator configuration. Defaults reproduce the three-tier topology
// with 512 E2 nodes, two data-accessing xApps at a 10 ms loop threshold, a
// free cloud node, and the tiered cost/capacity table.
struct HierarchicalTopologySpec {
    std::array<TierSpec, 3> tiers{{
        {5, 10.0, 4.0, 2.0, 1.0, 32.0, 64.0, 256.0},   // Tier-1, closest to the core
        {20, 20.0, 8.0, 4.0, 2.0, 16.0, 32.0, 256.0},  // Tier-2
        {487, 30.0, 16.0, 8.0, 4.0, 8.0, 16.0, 256.0}, // Tier-3, bottom
    }};
    CloudSpec cloud;
    ComponentDemands demands{
        {4.0, 8.0, 4.0},  // RIC_Man
        {2.0, 4.0, 2.0},  // E2T
        {2.0, 4.0, 1.0},  // SDL/STSL
        {1.0, 2.0, 50.0}, // NIBs
    };
    ResourceVec xapp_demands{1.0, 2.0, 1.0};
    int n_xapps = 2;
    double rho_ms = 10.0;
    bool xapps_need_data = true;
    double round_trip_factor = 2.0;
    double cloud_link_ms = 4.0;  // Tier-1 to cloud, one way
    double cn_local_link_ms = 1.0; // CN to the site it is co-located with
};

struct LatencyDelta {
    std::string node_a;
    std::string node_b;
    double added_ms = 0.0;
    std::optional<double> duration_s; // absent: persists to the horizon
};

struct CnCrash {
    std::string cn;
    std::optional<double> downtime_s; // absent: down to the horizon
};

using Fault = std::variant<LatencyDelta, CnCrash>;

struct TimedFault {
    double time_s = 0.0;
    Fault fault;
};

struct FaultSchedule {
    std::vector<TimedFault> faults;
};

// Builds the hierarchical RAN overlay: one cloud node, E2 nodes split across
// three tiers, and n_cns edge CNs co-located with E2 sites from the bottom
// tier upward. Inter-tier link latencies are seeded uniform draws from
// {1,2,2,3,3} ms, the Tier-1 uplink is 4 ms, and overlay latencies are
// shortest-path sums over the resulting tree. Throws ConfigError when the
// tier counts cannot host n_cns.
Instance generate_hierarchical_topology(const HierarchicalTopologySpec& spec, int n_cns,
                                        std::uint64_t seed);

// Persistent latency increase on the link between `e2` and the E2T host of
// its initial (heuristic) placement, large enough by default to push the
// loop past its threshold.
FaultSchedule scenario_latency_spike(const Instance& instance, const std::string& e2,
                                     double added_ms = 10.0, double at_s = 150.0);

// Abrupt shutdown of an edge CN. Refuses the cloud node.
FaultSchedule scenario_cn_crash(const Instance& instance, const std::string& cn,
                                double at_s = 30.0,
                                std::optional<double> downtime_s = std::nullopt);

} // namespace rico

#endif
