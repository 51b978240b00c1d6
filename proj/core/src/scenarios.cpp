#include "rico/scenarios.hpp"

#include <algorithm>
#include <queue>
#include <random>

#include "rico/heuristic.hpp"

namespace rico {

namespace {

constexpr std::array<double, 5> kTierLinkChoices{1.0, 2.0, 2.0, 3.0, 3.0};

struct UnderlayVertex {
    std::string id;
    int parent = -1; // adjacency is a tree rooted at the cloud
    double parent_latency = 0.0;
};

} // namespace

Instance generate_hierarchical_topology(const HierarchicalTopologySpec& spec, int n_cns,
                                        std::uint64_t seed) {
    for (const auto& tier : spec.tiers) {
        if (tier.e2_count < 0) throw ConfigError("tier e2_count must be >= 0");
    }
    const int total_e2 = spec.tiers[0].e2_count + spec.tiers[1].e2_count + spec.tiers[2].e2_count;
    if (total_e2 <= 0) throw ConfigError("at least one E2 node is required");
    if (n_cns < 0) throw ConfigError("n_cns must be >= 0");
    if (n_cns > total_e2) {
        throw ConfigError("n_cns exceeds the number of E2 sites (" + std::to_string(total_e2) + ")");
    }
    if (spec.n_xapps < 1) throw ConfigError("n_xapps must be >= 1");

    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    auto draw_link = [&rng]() { return kTierLinkChoices[rng() % kTierLinkChoices.size()]; };

    // Underlay tree: cloud at index 0, then E2 sites tier by tier. Tier-2
    // sites hang off Tier-1 sites round-robin, Tier-3 off Tier-2.
    std::vector<UnderlayVertex> verts;
    verts.push_back({"c0", -1, 0.0});

    std::vector<int> tier_of_site;          // per E2 site, 1..3
    std::vector<int> site_vertex;           // per E2 site, vertex index
    std::vector<int> tier1_sites, tier2_sites;

    int e2_counter = 0;
    for (int i = 0; i < spec.tiers[0].e2_count; ++i) {
        const std::string id = "n" + std::to_string(++e2_counter);
        verts.push_back({id, 0, spec.cloud_link_ms});
        tier1_sites.push_back(static_cast<int>(verts.size()) - 1);
        site_vertex.push_back(static_cast<int>(verts.size()) - 1);
        tier_of_site.push_back(1);
    }
    for (int i = 0; i < spec.tiers[1].e2_count; ++i) {
        const std::string id = "n" + std::to_string(++e2_counter);
        const int parent = tier1_sites.empty() ? 0 : tier1_sites[i % tier1_sites.size()];
        const double lat = tier1_sites.empty() ? spec.cloud_link_ms : draw_link();
        verts.push_back({id, parent, lat});
        tier2_sites.push_back(static_cast<int>(verts.size()) - 1);
        site_vertex.push_back(static_cast<int>(verts.size()) - 1);
        tier_of_site.push_back(2);
    }
    for (int i = 0; i < spec.tiers[2].e2_count; ++i) {
        const std::string id = "n" + std::to_string(++e2_counter);
        int parent;
        if (!tier2_sites.empty()) {
            parent = tier2_sites[i % tier2_sites.size()];
        } else if (!tier1_sites.empty()) {
            parent = tier1_sites[i % tier1_sites.size()];
        } else {
            parent = 0;
        }
        const double lat = (tier2_sites.empty() && tier1_sites.empty()) ? spec.cloud_link_ms : draw_link();
        verts.push_back({id, parent, lat});
        site_vertex.push_back(static_cast<int>(verts.size()) - 1);
        tier_of_site.push_back(3);
    }

    // Edge CNs co-locate with E2 sites, bottom tier first, site id order.
    std::vector<int> fill_order;
    for (int t = 3; t >= 1; --t) {
        for (std::size_t s = 0; s < site_vertex.size(); ++s) {
            if (tier_of_site[s] == t) fill_order.push_back(static_cast<int>(s));
        }
    }
    std::vector<int> cn_site(n_cns);
    for (int j = 0; j < n_cns; ++j) {
        const int site = fill_order[j];
        cn_site[j] = site;
        verts.push_back({"c" + std::to_string(j + 1), site_vertex[site], spec.cn_local_link_ms});
    }

    // All-pairs distances over the tree.
    const std::size_t nv = verts.size();
    std::vector<std::vector<std::pair<int, double>>> adj(nv);
    for (std::size_t v = 1; v < nv; ++v) {
        adj[v].push_back({verts[v].parent, verts[v].parent_latency});
        adj[verts[v].parent].push_back({static_cast<int>(v), verts[v].parent_latency});
    }
    std::vector<double> dist(nv * nv, 0.0);
    for (std::size_t src = 0; src < nv; ++src) {
        std::vector<double> d(nv, -1.0);
        std::queue<int> frontier;
        d[src] = 0.0;
        frontier.push(static_cast<int>(src));
        while (!frontier.empty()) {
            const int v = frontier.front();
            frontier.pop();
            for (const auto& [next, w] : adj[v]) {
                if (d[next] < 0.0) {
                    d[next] = d[v] + w;
                    frontier.push(next);
                }
            }
        }
        for (std::size_t dst = 0; dst < nv; ++dst) dist[src * nv + dst] = d[dst];
    }

    Instance instance;
    instance.round_trip_factor = spec.round_trip_factor;
    instance.demands = spec.demands;

    std::vector<std::string> xapp_ids;
    for (int x = 0; x < spec.n_xapps; ++x) xapp_ids.push_back("x" + std::to_string(x + 1));
    for (const auto& id : xapp_ids) {
        XAppSpec xa;
        xa.id = id;
        xa.rho_ms = spec.rho_ms;
        xa.needs_data = spec.xapps_need_data;
        xa.demands = spec.xapp_demands;
        instance.xapps.push_back(std::move(xa));
    }

    {
        ComputeNode cloud;
        cloud.id = "c0";
        cloud.tier = 0;
        cloud.proc_capacity = Capacity::unbounded();
        cloud.mem_capacity = Capacity::unbounded();
        cloud.sto_capacity = Capacity::unbounded();
        cloud.fixed_cost = spec.cloud.fixed_cost;
        cloud.var_cost_ricman = spec.cloud.var_ricman;
        cloud.var_cost_e2t = spec.cloud.var_e2t;
        cloud.var_cost_sdl = spec.cloud.var_sdl;
        cloud.var_cost_nib = spec.cloud.var_nib;
        for (const auto& id : xapp_ids) cloud.var_cost_xapp[id] = spec.cloud.var_xapp;
        instance.compute_nodes.push_back(std::move(cloud));
    }
    for (int j = 0; j < n_cns; ++j) {
        const TierSpec& tier = spec.tiers[tier_of_site[cn_site[j]] - 1];
        ComputeNode cn;
        cn.id = "c" + std::to_string(j + 1);
        cn.tier = tier_of_site[cn_site[j]];
        cn.proc_capacity = Capacity::of(tier.proc);
        cn.mem_capacity = Capacity::of(tier.mem);
        cn.sto_capacity = Capacity::of(tier.sto);
        cn.fixed_cost = tier.cn_fixed_cost;
        cn.var_cost_ricman = tier.var_ricman_e2t;
        cn.var_cost_e2t = tier.var_ricman_e2t;
        cn.var_cost_sdl = tier.var_sdl_nib;
        cn.var_cost_nib = tier.var_sdl_nib;
        for (const auto& id : xapp_ids) cn.var_cost_xapp[id] = tier.var_xapp;
        instance.compute_nodes.push_back(std::move(cn));
    }

    for (std::size_t s = 0; s < site_vertex.size(); ++s) {
        E2Node e2;
        e2.id = verts[site_vertex[s]].id;
        e2.tier = tier_of_site[s];
        instance.e2_nodes.push_back(std::move(e2));
    }

    std::vector<std::string> node_order;
    std::vector<int> vertex_of_node;
    node_order.push_back("c0");
    vertex_of_node.push_back(0);
    for (int j = 0; j < n_cns; ++j) {
        node_order.push_back("c" + std::to_string(j + 1));
        vertex_of_node.push_back(static_cast<int>(nv) - n_cns + j);
    }
    for (std::size_t s = 0; s < site_vertex.size(); ++s) {
        node_order.push_back(verts[site_vertex[s]].id);
        vertex_of_node.push_back(site_vertex[s]);
    }

    OverlayGraph graph(node_order);
    std::vector<double> matrix(node_order.size() * node_order.size(), 0.0);
    for (std::size_t i = 0; i < node_order.size(); ++i) {
        for (std::size_t j = 0; j < node_order.size(); ++j) {
            matrix[i * node_order.size() + j] =
                dist[static_cast<std::size_t>(vertex_of_node[i]) * nv + vertex_of_node[j]];
        }
    }
    graph.load_row_major(std::move(matrix));
    instance.graph = std::move(graph);

    return instance;
}

FaultSchedule scenario_latency_spike(const Instance& instance, const std::string& e2,
                                     double added_ms, double at_s) {
    if (instance.find_e2(e2) == nullptr) {
        throw std::invalid_argument("unknown E2 node " + e2);
    }
    const HeuristicResult initial = solve_heuristic(instance);
    const std::string& e2t_host = initial.solution.config.at(e2).t;

    FaultSchedule schedule;
    schedule.faults.push_back({at_s, LatencyDelta{e2, e2t_host, added_ms, std::nullopt}});
    return schedule;
}

FaultSchedule scenario_cn_crash(const Instance& instance, const std::string& cn,
                                double at_s, std::optional<double> downtime_s) {
    const ComputeNode* node = instance.find_cn(cn);
    if (node == nullptr) throw std::invalid_argument("unknown compute node " + cn);
    if (node->tier == 0) {
        throw CloudCrashError("the cloud node is assumed always available; cannot crash " + cn);
    }
    FaultSchedule schedule;
    schedule.faults.push_back({at_s, CnCrash{cn, downtime_s}});
    return schedule;
}

} // namespace rico
