#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rico/heuristic.hpp"
#include "rico/json_io.hpp"
#include "rico/scenarios.hpp"
#include "support/test_support.hpp"

using namespace rico;

TEST_CASE("generated instances pass structural validation") {
    for (const int n_cns : {0, 1, 4, 12, 512}) {
        const Instance in = generate_hierarchical_topology({}, n_cns, 7);
        CHECK(validate_instance(in).empty());
        CHECK(in.compute_nodes.size() == static_cast<std::size_t>(n_cns + 1));
    }
}

TEST_CASE("default tier sizes split 512 E2 nodes 5/20/487") {
    const Instance in = generate_hierarchical_topology({}, 2, 1);
    REQUIRE(in.e2_nodes.size() == 512);
    int per_tier[4] = {0, 0, 0, 0};
    for (const auto& e2 : in.e2_nodes) ++per_tier[e2.tier];
    CHECK(per_tier[1] == 5);
    CHECK(per_tier[2] == 20);
    CHECK(per_tier[3] == 487);
}

TEST_CASE("edge CNs fill from the bottom tier and carry the tier table") {
    const Instance in = generate_hierarchical_topology({}, 512, 3);
    int tiers[4] = {0, 0, 0, 0};
    for (const auto& cn : in.compute_nodes) {
        if (cn.tier == 0) continue;
        ++tiers[cn.tier];
        if (cn.tier == 1) {
            CHECK(cn.proc_capacity.value() == 32.0);
            CHECK(cn.mem_capacity.value() == 64.0);
            CHECK(cn.sto_capacity.value() == 256.0);
            CHECK(cn.fixed_cost == 10.0);
            CHECK(cn.var_cost_e2t == 4.0);
            CHECK(cn.var_cost_sdl == 2.0);
            CHECK(cn.var_cost_xapp.at("x1") == 1.0);
        }
    }
    CHECK(tiers[3] == 487);
    CHECK(tiers[2] == 20);
    CHECK(tiers[1] == 5);
    // the first CN lands on a bottom-tier site, the last on a top-tier site
    CHECK(in.find_cn("c1")->tier == 3);
    CHECK(in.find_cn("c512")->tier == 1);

    // cloud node: free, unbounded, rates 2/2/1/1/1
    const ComputeNode* cloud = in.cloud();
    REQUIRE(cloud != nullptr);
    CHECK(cloud->fixed_cost == 0.0);
    CHECK(cloud->var_cost_ricman == 2.0);
    CHECK(cloud->var_cost_e2t == 2.0);
    CHECK(cloud->var_cost_sdl == 1.0);
    CHECK(cloud->var_cost_nib == 1.0);
    CHECK(cloud->var_cost_xapp.at("x2") == 1.0);
    CHECK(cloud->proc_capacity.is_unbounded());

    // both xApps access the data layers under a 10 ms loop
    REQUIRE(in.xapps.size() == 2);
    for (const auto& xa : in.xapps) {
        CHECK(xa.needs_data);
        CHECK(xa.rho_ms == 10.0);
    }
}

TEST_CASE("seeded generation is byte-deterministic") {
    const Instance a = generate_hierarchical_topology({}, 24, 99);
    const Instance b = generate_hierarchical_topology({}, 24, 99);
    CHECK(instance_to_json(a) == instance_to_json(b));
    const Instance c = generate_hierarchical_topology({}, 24, 100);
    CHECK(instance_to_json(a) != instance_to_json(c));
}

TEST_CASE("overlay latencies are positive integer path sums") {
    const Instance in = generate_hierarchical_topology({}, 16, 5);
    const auto& order = in.graph.node_order();
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = 0; j < order.size(); ++j) {
            const double v = in.graph.matrix()[i * order.size() + j];
            if (i == j) {
                CHECK(v == 0.0);
            } else {
                CHECK(v >= 1.0);
                CHECK(v == std::floor(v));
            }
        }
    }
}

TEST_CASE("without edge CNs every loop pays the cloud uplink twice") {
    const Instance in = generate_hierarchical_topology({}, 0, 11);
    REQUIRE(in.compute_nodes.size() == 1);
    for (const auto& e2 : in.e2_nodes) {
        CHECK(in.graph.latency(e2.id, "c0") >= 4.0);
        if (e2.tier == 1) CHECK(in.graph.latency(e2.id, "c0") == 4.0);
    }
}

TEST_CASE("tier counts that cannot host the CNs are rejected") {
    CHECK_THROWS_AS(generate_hierarchical_topology({}, 513, 1), ConfigError);
    HierarchicalTopologySpec empty;
    empty.tiers[0].e2_count = 0;
    empty.tiers[1].e2_count = 0;
    empty.tiers[2].e2_count = 0;
    CHECK_THROWS_AS(generate_hierarchical_topology(empty, 0, 1), ConfigError);
}

namespace {

HierarchicalTopologySpec small_spec() {
    HierarchicalTopologySpec spec;
    spec.tiers[0].e2_count = 1;
    spec.tiers[1].e2_count = 1;
    spec.tiers[2].e2_count = 2;
    return spec;
}

} // namespace

TEST_CASE("latency spike targets the initial E2T link") {
    const Instance in = generate_hierarchical_topology(small_spec(), 4, 7);
    const auto initial = solve_heuristic(in);
    const FaultSchedule schedule = scenario_latency_spike(in, "n4");
    REQUIRE(schedule.faults.size() == 1);
    CHECK(schedule.faults.front().time_s == 150.0);
    const auto& delta = std::get<LatencyDelta>(schedule.faults.front().fault);
    CHECK(delta.node_a == "n4");
    CHECK(delta.node_b == initial.solution.config.at("n4").t);
    CHECK(delta.added_ms == 10.0);

    CHECK_THROWS_AS(scenario_latency_spike(in, "n99"), std::invalid_argument);
}

TEST_CASE("CN crash refuses the cloud and unknown nodes") {
    const Instance in = generate_hierarchical_topology(small_spec(), 4, 7);
    CHECK_THROWS_AS(scenario_cn_crash(in, "c0"), CloudCrashError);
    CHECK_THROWS_AS(scenario_cn_crash(in, "c99"), std::invalid_argument);
    const FaultSchedule schedule = scenario_cn_crash(in, "c2", 30.0);
    REQUIRE(schedule.faults.size() == 1);
    CHECK(schedule.faults.front().time_s == 30.0);
    CHECK(std::get<CnCrash>(schedule.faults.front().fault).cn == "c2");
}

TEST_CASE("instances survive a JSON round trip") {
    const Instance in = generate_hierarchical_topology(small_spec(), 4, 7);
    const std::string once = instance_to_json(in);
    const Instance parsed = instance_from_json(once);
    CHECK(validate_instance(parsed).empty());
    CHECK(instance_to_json(parsed) == once);
    CHECK(parsed.round_trip_factor == in.round_trip_factor);
    CHECK(parsed.graph.latency("n1", "c0") == in.graph.latency("n1", "c0"));
}

TEST_CASE("fault schedules survive a JSON round trip") {
    const Instance in = generate_hierarchical_topology(small_spec(), 4, 7);
    const FaultSchedule spike = scenario_latency_spike(in, "n4");
    const FaultSchedule crash = scenario_cn_crash(in, "c1", 30.0, 60.0);
    for (const auto& schedule : {spike, crash}) {
        const FaultSchedule parsed = fault_schedule_from_json(fault_schedule_to_json(schedule));
        CHECK(fault_schedule_to_json(parsed) == fault_schedule_to_json(schedule));
    }
}
