#include "rico/json_io.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace rico {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json capacity_to_json(const Capacity& c) {
    if (c.is_unbounded()) return "unbounded";
    return c.value();
}

Capacity capacity_from_json(const nlohmann::json& j, const std::string& what) {
    if (j.is_string()) {
        if (j.get<std::string>() == "unbounded") return Capacity::unbounded();
        throw std::invalid_argument(what + ": expected a number or \"unbounded\"");
    }
    return Capacity::of(j.get<double>());
}

ordered_json resources_to_json(const ResourceVec& rv) {
    return ordered_json{{"proc", rv.proc}, {"mem", rv.mem}, {"sto", rv.sto}};
}

ResourceVec resources_from_json(const nlohmann::json& j) {
    ResourceVec rv;
    rv.proc = j.at("proc").get<double>();
    rv.mem = j.at("mem").get<double>();
    rv.sto = j.at("sto").get<double>();
    return rv;
}

ordered_json id_set_to_json(const IdSet& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& id : s) arr.push_back(id);
    return arr;
}

} // namespace

std::string format_number(double v) {
    return nlohmann::json(v).dump();
}

std::string instance_to_json(const Instance& instance, int indent) {
    ordered_json j;
    j["graph"] = ordered_json{{"node_order", instance.graph.node_order()},
                              {"latency", instance.graph.matrix()}};
    ordered_json cns = ordered_json::array();
    for (const auto& cn : instance.compute_nodes) {
        ordered_json o;
        o["id"] = cn.id;
        o["tier"] = cn.tier;
        o["proc_capacity"] = capacity_to_json(cn.proc_capacity);
        o["mem_capacity"] = capacity_to_json(cn.mem_capacity);
        o["sto_capacity"] = capacity_to_json(cn.sto_capacity);
        o["fixed_cost"] = cn.fixed_cost;
        o["var_cost_ricman"] = cn.var_cost_ricman;
        o["var_cost_e2t"] = cn.var_cost_e2t;
        o["var_cost_sdl"] = cn.var_cost_sdl;
        o["var_cost_nib"] = cn.var_cost_nib;
        ordered_json xc;
        for (const auto& [id, cost] : cn.var_cost_xapp) xc[id] = cost;
        o["var_cost_xapp"] = std::move(xc);
        cns.push_back(std::move(o));
    }
    j["compute_nodes"] = std::move(cns);
    ordered_json e2s = ordered_json::array();
    for (const auto& e2 : instance.e2_nodes) {
        e2s.push_back(ordered_json{{"id", e2.id}, {"tier", e2.tier}});
    }
    j["e2_nodes"] = std::move(e2s);
    j["demands"] = ordered_json{{"ricman", resources_to_json(instance.demands.ricman)},
                                {"e2t", resources_to_json(instance.demands.e2t)},
                                {"sdl", resources_to_json(instance.demands.sdl)},
                                {"nib", resources_to_json(instance.demands.nib)}};
    ordered_json xapps = ordered_json::array();
    for (const auto& xa : instance.xapps) {
        ordered_json o;
        o["id"] = xa.id;
        o["rho_ms"] = xa.rho_ms;
        o["needs_data"] = xa.needs_data;
        o["chain"] = xa.chain;
        o["demands"] = resources_to_json(xa.demands);
        xapps.push_back(std::move(o));
    }
    j["xapps"] = std::move(xapps);
    j["round_trip_factor"] = instance.round_trip_factor;
    return j.dump(indent);
}

Instance instance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Instance instance;

    const auto& jg = j.at("graph");
    OverlayGraph graph(jg.at("node_order").get<std::vector<std::string>>());
    graph.load_row_major(jg.at("latency").get<std::vector<double>>());
    instance.graph = std::move(graph);

    for (const auto& o : j.at("compute_nodes")) {
        ComputeNode cn;
        cn.id = o.at("id").get<std::string>();
        cn.tier = o.at("tier").get<int>();
        cn.proc_capacity = capacity_from_json(o.at("proc_capacity"), cn.id + ".proc_capacity");
        cn.mem_capacity = capacity_from_json(o.at("mem_capacity"), cn.id + ".mem_capacity");
        cn.sto_capacity = capacity_from_json(o.at("sto_capacity"), cn.id + ".sto_capacity");
        cn.fixed_cost = o.at("fixed_cost").get<double>();
        cn.var_cost_ricman = o.at("var_cost_ricman").get<double>();
        cn.var_cost_e2t = o.at("var_cost_e2t").get<double>();
        cn.var_cost_sdl = o.at("var_cost_sdl").get<double>();
        cn.var_cost_nib = o.at("var_cost_nib").get<double>();
        if (o.contains("var_cost_xapp")) {
            for (const auto& [id, cost] : o.at("var_cost_xapp").items()) {
                cn.var_cost_xapp[id] = cost.get<double>();
            }
        }
        instance.compute_nodes.push_back(std::move(cn));
    }
    for (const auto& o : j.at("e2_nodes")) {
        E2Node e2;
        e2.id = o.at("id").get<std::string>();
        e2.tier = o.value("tier", 0);
        instance.e2_nodes.push_back(std::move(e2));
    }
    const auto& jd = j.at("demands");
    instance.demands.ricman = resources_from_json(jd.at("ricman"));
    instance.demands.e2t = resources_from_json(jd.at("e2t"));
    instance.demands.sdl = resources_from_json(jd.at("sdl"));
    instance.demands.nib = resources_from_json(jd.at("nib"));
    for (const auto& o : j.at("xapps")) {
        XAppSpec xa;
        xa.id = o.at("id").get<std::string>();
        xa.rho_ms = o.at("rho_ms").get<double>();
        xa.needs_data = o.at("needs_data").get<bool>();
        xa.chain = o.value("chain", std::vector<std::string>{});
        xa.demands = resources_from_json(o.at("demands"));
        instance.xapps.push_back(std::move(xa));
    }
    instance.round_trip_factor = j.value("round_trip_factor", 2.0);
    return instance;
}

namespace {

ordered_json solution_to_ordered(const Solution& solution) {
    ordered_json j;
    ordered_json cfg;
    for (const auto& [e2, c] : solution.config) {
        cfg[e2] = ordered_json{{"r", c.r}, {"t", c.t}, {"s", c.s}, {"d", c.d}};
    }
    j["config"] = std::move(cfg);
    ordered_json xh;
    for (const auto& [e2, hosts] : solution.xapp_host) {
        ordered_json inner;
        for (const auto& [xa, cn] : hosts) inner[xa] = cn;
        xh[e2] = std::move(inner);
    }
    j["xapp_host"] = std::move(xh);
    j["used"] = id_set_to_json(solution.used);
    j["ricman_on"] = id_set_to_json(solution.ricman_on);
    j["e2t_on"] = id_set_to_json(solution.e2t_on);
    j["sdl_on"] = id_set_to_json(solution.sdl_on);
    j["nib_on"] = id_set_to_json(solution.nib_on);
    ordered_json xo;
    for (const auto& [cn, xs] : solution.xapp_on) xo[cn] = id_set_to_json(xs);
    j["xapp_on"] = std::move(xo);
    j["fixed_cost"] = solution.fixed_cost;
    j["variable_cost"] = solution.variable_cost;
    j["total_cost"] = solution.total_cost;
    return j;
}

} // namespace

std::string solution_to_json(const Solution& solution, int indent) {
    return solution_to_ordered(solution).dump(indent);
}

Solution solution_from_json(const std::string& text, const Instance& instance) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Solution sol;
    for (const auto& [e2, c] : j.at("config").items()) {
        Configuration cfg;
        cfg.r = c.at("r").get<std::string>();
        cfg.t = c.at("t").get<std::string>();
        cfg.s = c.at("s").get<std::string>();
        cfg.d = c.at("d").get<std::string>();
        sol.config[e2] = std::move(cfg);
    }
    for (const auto& [e2, hosts] : j.at("xapp_host").items()) {
        for (const auto& [xa, cn] : hosts.items()) {
            sol.xapp_host[e2][xa] = cn.get<std::string>();
        }
    }
    sol.rederive(instance);
    return sol;
}

std::string exact_result_to_json(const ExactResult& result, int indent) {
    ordered_json j;
    j["status"] = to_string(result.status);
    if (result.best_cost) {
        j["cost"] = *result.best_cost;
    } else {
        j["cost"] = nullptr;
    }
    j["elapsed_s"] = result.elapsed_s;
    j["explored_nodes"] = result.explored_nodes;
    if (result.best) {
        j["solution"] = solution_to_ordered(*result.best);
    } else {
        j["solution"] = nullptr;
    }
    return j.dump(indent);
}

std::string violations_to_json(const std::vector<Violation>& violations, int indent) {
    ordered_json arr = ordered_json::array();
    for (const auto& v : violations) {
        arr.push_back(ordered_json{{"kind", to_string(v.kind)},
                                   {"subject", v.subject},
                                   {"measured", v.measured},
                                   {"limit", v.limit}});
    }
    return arr.dump(indent);
}

std::string sim_config_to_json(const SimConfig& config, int indent) {
    ordered_json j;
    j["monitor_period"] = config.monitor_period;
    j["latency_persistence_window"] = config.latency_persistence_window;
    j["node_down_timeout"] = config.node_down_timeout;
    j["heuristic_solver_delay"] = config.heuristic_solver_delay;
    j["redeploy_duration"] = config.redeploy_duration;
    j["sim_horizon"] = config.sim_horizon;
    j["rng_seed"] = config.rng_seed;
    j["exact_budget"] = config.exact_budget;
    return j.dump(indent);
}

SimConfig sim_config_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SimConfig c;
    c.monitor_period = j.value("monitor_period", c.monitor_period);
    c.latency_persistence_window = j.value("latency_persistence_window", c.latency_persistence_window);
    c.node_down_timeout = j.value("node_down_timeout", c.node_down_timeout);
    c.heuristic_solver_delay = j.value("heuristic_solver_delay", c.heuristic_solver_delay);
    c.redeploy_duration = j.value("redeploy_duration", c.redeploy_duration);
    c.sim_horizon = j.value("sim_horizon", c.sim_horizon);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    c.exact_budget = j.value("exact_budget", c.exact_budget);
    return c;
}

std::string fault_schedule_to_json(const FaultSchedule& schedule, int indent) {
    ordered_json arr = ordered_json::array();
    for (const auto& f : schedule.faults) {
        ordered_json o;
        o["time"] = f.time_s;
        if (std::holds_alternative<LatencyDelta>(f.fault)) {
            const auto& d = std::get<LatencyDelta>(f.fault);
            o["kind"] = "latency_delta";
            o["node_a"] = d.node_a;
            o["node_b"] = d.node_b;
            o["added_ms"] = d.added_ms;
            if (d.duration_s) {
                o["duration_s"] = *d.duration_s;
            } else {
                o["duration_s"] = nullptr;
            }
        } else {
            const auto& c = std::get<CnCrash>(f.fault);
            o["kind"] = "cn_crash";
            o["cn"] = c.cn;
            if (c.downtime_s) {
                o["downtime_s"] = *c.downtime_s;
            } else {
                o["downtime_s"] = nullptr;
            }
        }
        arr.push_back(std::move(o));
    }
    return ordered_json{{"faults", std::move(arr)}}.dump(indent);
}

FaultSchedule fault_schedule_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    FaultSchedule schedule;
    for (const auto& o : j.at("faults")) {
        TimedFault f;
        f.time_s = o.at("time").get<double>();
        const std::string kind = o.at("kind").get<std::string>();
        if (kind == "latency_delta") {
            LatencyDelta d;
            d.node_a = o.at("node_a").get<std::string>();
            d.node_b = o.at("node_b").get<std::string>();
            d.added_ms = o.at("added_ms").get<double>();
            if (o.contains("duration_s") && !o.at("duration_s").is_null()) {
                d.duration_s = o.at("duration_s").get<double>();
            }
            f.fault = std::move(d);
        } else if (kind == "cn_crash") {
            CnCrash c;
            c.cn = o.at("cn").get<std::string>();
            if (o.contains("downtime_s") && !o.at("downtime_s").is_null()) {
                c.downtime_s = o.at("downtime_s").get<double>();
            }
            f.fault = std::move(c);
        } else {
            throw std::invalid_argument("unknown fault kind " + kind);
        }
        schedule.faults.push_back(std::move(f));
    }
    return schedule;
}

namespace {

ordered_json tier_to_json(const TierSpec& t) {
    ordered_json o;
    o["e2_count"] = t.e2_count;
    o["cn_fixed_cost"] = t.cn_fixed_cost;
    o["var_ricman_e2t"] = t.var_ricman_e2t;
    o["var_sdl_nib"] = t.var_sdl_nib;
    o["var_xapp"] = t.var_xapp;
    o["proc"] = t.proc;
    o["mem"] = t.mem;
    o["sto"] = t.sto;
    return o;
}

TierSpec tier_from_json(const nlohmann::json& j, TierSpec base) {
    base.e2_count = j.value("e2_count", base.e2_count);
    base.cn_fixed_cost = j.value("cn_fixed_cost", base.cn_fixed_cost);
    base.var_ricman_e2t = j.value("var_ricman_e2t", base.var_ricman_e2t);
    base.var_sdl_nib = j.value("var_sdl_nib", base.var_sdl_nib);
    base.var_xapp = j.value("var_xapp", base.var_xapp);
    base.proc = j.value("proc", base.proc);
    base.mem = j.value("mem", base.mem);
    base.sto = j.value("sto", base.sto);
    return base;
}

} // namespace

std::string topology_spec_to_json(const HierarchicalTopologySpec& spec, int indent) {
    ordered_json j;
    ordered_json tiers = ordered_json::array();
    for (const auto& t : spec.tiers) tiers.push_back(tier_to_json(t));
    j["tiers"] = std::move(tiers);
    j["cloud"] = ordered_json{{"fixed_cost", spec.cloud.fixed_cost},
                              {"var_ricman", spec.cloud.var_ricman},
                              {"var_e2t", spec.cloud.var_e2t},
                              {"var_sdl", spec.cloud.var_sdl},
                              {"var_nib", spec.cloud.var_nib},
                              {"var_xapp", spec.cloud.var_xapp}};
    j["demands"] = ordered_json{{"ricman", resources_to_json(spec.demands.ricman)},
                                {"e2t", resources_to_json(spec.demands.e2t)},
                                {"sdl", resources_to_json(spec.demands.sdl)},
                                {"nib", resources_to_json(spec.demands.nib)}};
    j["xapp_demands"] = resources_to_json(spec.xapp_demands);
    j["n_xapps"] = spec.n_xapps;
    j["rho_ms"] = spec.rho_ms;
    j["xapps_need_data"] = spec.xapps_need_data;
    j["round_trip_factor"] = spec.round_trip_factor;
    j["cloud_link_ms"] = spec.cloud_link_ms;
    j["cn_local_link_ms"] = spec.cn_local_link_ms;
    return j.dump(indent);
}

HierarchicalTopologySpec topology_spec_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    HierarchicalTopologySpec spec;
    if (j.contains("tiers")) {
        const auto& tiers = j.at("tiers");
        if (tiers.size() != spec.tiers.size()) {
            throw std::invalid_argument("tiers must list exactly 3 entries");
        }
        for (std::size_t i = 0; i < spec.tiers.size(); ++i) {
            spec.tiers[i] = tier_from_json(tiers[i], spec.tiers[i]);
        }
    }
    if (j.contains("cloud")) {
        const auto& c = j.at("cloud");
        spec.cloud.fixed_cost = c.value("fixed_cost", spec.cloud.fixed_cost);
        spec.cloud.var_ricman = c.value("var_ricman", spec.cloud.var_ricman);
        spec.cloud.var_e2t = c.value("var_e2t", spec.cloud.var_e2t);
        spec.cloud.var_sdl = c.value("var_sdl", spec.cloud.var_sdl);
        spec.cloud.var_nib = c.value("var_nib", spec.cloud.var_nib);
        spec.cloud.var_xapp = c.value("var_xapp", spec.cloud.var_xapp);
    }
    if (j.contains("demands")) {
        const auto& d = j.at("demands");
        if (d.contains("ricman")) spec.demands.ricman = resources_from_json(d.at("ricman"));
        if (d.contains("e2t")) spec.demands.e2t = resources_from_json(d.at("e2t"));
        if (d.contains("sdl")) spec.demands.sdl = resources_from_json(d.at("sdl"));
        if (d.contains("nib")) spec.demands.nib = resources_from_json(d.at("nib"));
    }
    if (j.contains("xapp_demands")) spec.xapp_demands = resources_from_json(j.at("xapp_demands"));
    spec.n_xapps = j.value("n_xapps", spec.n_xapps);
    spec.rho_ms = j.value("rho_ms", spec.rho_ms);
    spec.xapps_need_data = j.value("xapps_need_data", spec.xapps_need_data);
    spec.round_trip_factor = j.value("round_trip_factor", spec.round_trip_factor);
    spec.cloud_link_ms = j.value("cloud_link_ms", spec.cloud_link_ms);
    spec.cn_local_link_ms = j.value("cn_local_link_ms", spec.cn_local_link_ms);
    return spec;
}

std::string events_to_jsonl(const EventTrace& trace) {
    std::ostringstream os;
    for (const auto& ev : trace.events) {
        ordered_json j;
        j["t"] = ev.time;
        j["event"] = to_string(ev.kind);
        if (!ev.e2.empty()) j["e2"] = ev.e2;
        if (!ev.xapp.empty()) j["xapp"] = ev.xapp;
        if (!ev.cn.empty()) j["cn"] = ev.cn;
        if (!ev.strategy.empty()) j["strategy"] = ev.strategy;
        if (!ev.detail.empty()) j["detail"] = ev.detail;
        if (!std::isnan(ev.measured)) j["measured_ms"] = ev.measured;
        if (!std::isnan(ev.limit)) j["limit_ms"] = ev.limit;
        if (!std::isnan(ev.cost)) j["cost"] = ev.cost;
        if (ev.solution_hash) j["solution_hash"] = *ev.solution_hash;
        if (ev.applied) j["applied"] = *ev.applied;
        os << j.dump() << "\n";
    }
    return os.str();
}

std::string samples_to_csv(const EventTrace& trace) {
    std::ostringstream os;
    os << "time,e2,xapp,loop_latency_ms\n";
    for (const auto& s : trace.samples) {
        os << format_number(s.time) << "," << s.e2 << "," << s.xapp << ","
           << format_number(s.latency_ms) << "\n";
    }
    return os.str();
}

std::string phase_log_to_jsonl(const std::vector<PhaseLogEntry>& log) {
    std::ostringstream os;
    for (const auto& entry : log) {
        ordered_json j;
        j["phase"] = entry.phase;
        j["e2"] = entry.e2;
        j["component"] = entry.component;
        if (!entry.from.empty()) j["from"] = entry.from;
        j["to"] = entry.to;
        os << j.dump() << "\n";
    }
    return os.str();
}

} // namespace rico
