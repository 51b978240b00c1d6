#include "rico/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rico {

OverlayGraph::OverlayGraph(std::vector<std::string> node_order)
    : node_order_(std::move(node_order)) {
    index_.reserve(node_order_.size());
    for (std::size_t i = 0; i < node_order_.size(); ++i) {
        index_.emplace(node_order_[i], static_cast<int>(i));
    }
    latency_.assign(node_order_.size() * node_order_.size(), 0.0);
}

int OverlayGraph::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

double OverlayGraph::latency(const std::string& a, const std::string& b) const {
    const int ia = index_of(a);
    const int ib = index_of(b);
    if (ia < 0 || ib < 0) throw std::out_of_range("unknown graph node: " + (ia < 0 ? a : b));
    return latency_by_index(ia, ib);
}

void OverlayGraph::set_latency(const std::string& a, const std::string& b, double ms) {
    const int ia = index_of(a);
    const int ib = index_of(b);
    if (ia < 0 || ib < 0) throw std::out_of_range("unknown graph node: " + (ia < 0 ? a : b));
    set_latency_by_index(ia, ib, ms);
}

void OverlayGraph::set_latency_by_index(int a, int b, double ms) {
    if (a == b && ms != 0.0) throw std::invalid_argument("diagonal latency must stay 0");
    const std::size_t n = node_order_.size();
    latency_[static_cast<std::size_t>(a) * n + b] = ms;
    latency_[static_cast<std::size_t>(b) * n + a] = ms;
}

void OverlayGraph::load_row_major(std::vector<double> values) {
    if (values.size() != node_order_.size() * node_order_.size()) {
        throw std::invalid_argument("latency matrix size does not match node_order");
    }
    latency_ = std::move(values);
}

const ComputeNode* Instance::find_cn(const std::string& id) const {
    for (const auto& cn : compute_nodes) {
        if (cn.id == id) return &cn;
    }
    return nullptr;
}

const XAppSpec* Instance::find_xapp(const std::string& id) const {
    for (const auto& xa : xapps) {
        if (xa.id == id) return &xa;
    }
    return nullptr;
}

const E2Node* Instance::find_e2(const std::string& id) const {
    for (const auto& e2 : e2_nodes) {
        if (e2.id == id) return &e2;
    }
    return nullptr;
}

const ComputeNode* Instance::cloud() const {
    for (const auto& cn : compute_nodes) {
        if (cn.tier == 0) return &cn;
    }
    return nullptr;
}

double Instance::min_rho() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& xa : xapps) m = std::min(m, xa.rho_ms);
    return m;
}

void Solution::rederive(const Instance& instance) {
    used.clear();
    ricman_on.clear();
    e2t_on.clear();
    sdl_on.clear();
    nib_on.clear();
    xapp_on.clear();

    for (const auto& [e2, cfg] : config) {
        (void)e2;
        ricman_on.insert(cfg.r);
        e2t_on.insert(cfg.t);
        sdl_on.insert(cfg.s);
        nib_on.insert(cfg.d);
        used.insert(cfg.r);
        used.insert(cfg.t);
        used.insert(cfg.s);
        used.insert(cfg.d);
    }
    for (const auto& [e2, hosts] : xapp_host) {
        (void)e2;
        for (const auto& [xa, cn] : hosts) {
            xapp_on[cn].insert(xa);
            used.insert(cn);
        }
    }

    fixed_cost = rico::fixed_cost(instance, *this);
    variable_cost = rico::variable_cost(instance, *this);
    total_cost = fixed_cost + variable_cost;
}

std::string Solution::canonical() const {
    std::ostringstream os;
    for (const auto& [e2, cfg] : config) {
        os << e2 << ":r=" << cfg.r << ",t=" << cfg.t << ",s=" << cfg.s << ",d=" << cfg.d << ";";
    }
    for (const auto& [e2, hosts] : xapp_host) {
        for (const auto& [xa, cn] : hosts) {
            os << e2 << "." << xa << "=" << cn << ";";
        }
    }
    return os.str();
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::LatencyExceeded: return "LatencyExceeded";
        case ViolationKind::ProcOverflow: return "ProcOverflow";
        case ViolationKind::MemOverflow: return "MemOverflow";
        case ViolationKind::StoOverflow: return "StoOverflow";
        case ViolationKind::IncompleteAssignment: return "IncompleteAssignment";
    }
    return "?";
}

namespace {

bool nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_resource_vec(const ResourceVec& rv, const std::string& what,
                        std::vector<std::string>& errors) {
    if (!nonneg(rv.proc)) errors.push_back(what + ".proc must be >= 0");
    if (!nonneg(rv.mem)) errors.push_back(what + ".mem must be >= 0");
    if (!nonneg(rv.sto)) errors.push_back(what + ".sto must be >= 0");
}

void check_capacity(const Capacity& c, const std::string& what,
                    std::vector<std::string>& errors) {
    if (!c.is_unbounded() && !(std::isfinite(c.value()) && c.value() > 0.0)) {
        errors.push_back(what + " must be > 0 or unbounded");
    }
}

// Host view over a Solution's raw maps.
struct SolutionHosts {
    const Solution& sol;
    const std::string& e2;
    const Configuration& cfg;

    const std::string& t() const { return cfg.t; }
    const std::string& s() const { return cfg.s; }
    const std::string& d() const { return cfg.d; }
    const std::string& xapp(const std::string& id) const {
        auto eit = sol.xapp_host.find(e2);
        if (eit != sol.xapp_host.end()) {
            auto xit = eit->second.find(id);
            if (xit != eit->second.end()) return xit->second;
        }
        throw MissingAssignmentError("no host assigned for xApp " + id + " of E2 node " + e2);
    }
};

struct DerivedView {
    IdSet used;
    IdSet ricman_on, e2t_on, sdl_on, nib_on;
    IdMap<IdSet> xapp_on;
};

DerivedView derive_view(const Solution& s) {
    DerivedView v;
    for (const auto& [e2, cfg] : s.config) {
        (void)e2;
        v.ricman_on.insert(cfg.r);
        v.e2t_on.insert(cfg.t);
        v.sdl_on.insert(cfg.s);
        v.nib_on.insert(cfg.d);
        v.used.insert(cfg.r);
        v.used.insert(cfg.t);
        v.used.insert(cfg.s);
        v.used.insert(cfg.d);
    }
    for (const auto& [e2, hosts] : s.xapp_host) {
        (void)e2;
        for (const auto& [xa, cn] : hosts) {
            v.xapp_on[cn].insert(xa);
            v.used.insert(cn);
        }
    }
    return v;
}

} // namespace

std::vector<std::string> validate_instance(const Instance& instance) {
    std::vector<std::string> errors;

    if (instance.e2_nodes.empty()) errors.push_back("e2_nodes must be nonempty");
    if (instance.compute_nodes.empty()) errors.push_back("compute_nodes must be nonempty");
    if (instance.xapps.empty()) errors.push_back("xapps must be nonempty");
    if (!(std::isfinite(instance.round_trip_factor) && instance.round_trip_factor > 0.0)) {
        errors.push_back("round_trip_factor must be > 0");
    }

    IdSet cn_ids, e2_ids, xapp_ids;
    int cloud_count = 0;
    for (const auto& cn : instance.compute_nodes) {
        if (!cn_ids.insert(cn.id).second) errors.push_back("duplicate compute node id " + cn.id);
        if (cn.tier == 0) {
            ++cloud_count;
            if (!cn.proc_capacity.is_unbounded() || !cn.mem_capacity.is_unbounded() ||
                !cn.sto_capacity.is_unbounded()) {
                errors.push_back("cloud node " + cn.id + " must have unbounded proc/mem/sto capacities");
            }
        }
        check_capacity(cn.proc_capacity, cn.id + ".proc_capacity", errors);
        check_capacity(cn.mem_capacity, cn.id + ".mem_capacity", errors);
        check_capacity(cn.sto_capacity, cn.id + ".sto_capacity", errors);
        if (!nonneg(cn.fixed_cost)) errors.push_back(cn.id + ".fixed_cost must be >= 0");
        if (!nonneg(cn.var_cost_ricman)) errors.push_back(cn.id + ".var_cost_ricman must be >= 0");
        if (!nonneg(cn.var_cost_e2t)) errors.push_back(cn.id + ".var_cost_e2t must be >= 0");
        if (!nonneg(cn.var_cost_sdl)) errors.push_back(cn.id + ".var_cost_sdl must be >= 0");
        if (!nonneg(cn.var_cost_nib)) errors.push_back(cn.id + ".var_cost_nib must be >= 0");
        for (const auto& [xa, cost] : cn.var_cost_xapp) {
            if (!nonneg(cost)) errors.push_back(cn.id + ".var_cost_xapp[" + xa + "] must be >= 0");
        }
    }
    if (cloud_count == 0) errors.push_back("no cloud node: exactly one compute node must have tier 0");
    if (cloud_count > 1) errors.push_back("duplicate cloud node: exactly one compute node may have tier 0");

    for (const auto& e2 : instance.e2_nodes) {
        if (!e2_ids.insert(e2.id).second) errors.push_back("duplicate E2 node id " + e2.id);
        if (cn_ids.count(e2.id)) errors.push_back("E2 node id " + e2.id + " collides with a compute node id");
    }

    check_resource_vec(instance.demands.ricman, "demands.ricman", errors);
    check_resource_vec(instance.demands.e2t, "demands.e2t", errors);
    check_resource_vec(instance.demands.sdl, "demands.sdl", errors);
    check_resource_vec(instance.demands.nib, "demands.nib", errors);

    for (const auto& xa : instance.xapps) {
        if (!xapp_ids.insert(xa.id).second) errors.push_back("duplicate xApp id " + xa.id);
        if (!(std::isfinite(xa.rho_ms) && xa.rho_ms > 0.0)) {
            errors.push_back(xa.id + ".rho_ms must be > 0");
        }
        check_resource_vec(xa.demands, xa.id + ".demands", errors);
        IdSet seen;
        for (const auto& c : xa.chain) {
            if (c == xa.id) errors.push_back(xa.id + ".chain must not contain itself");
            if (!seen.insert(c).second) errors.push_back(xa.id + ".chain contains duplicate " + c);
            if (instance.find_xapp(c) == nullptr) {
                errors.push_back(xa.id + ".chain references unknown xApp " + c);
            }
        }
    }

    // every CN must price every xApp
    for (const auto& cn : instance.compute_nodes) {
        for (const auto& xa : instance.xapps) {
            if (!cn.var_cost_xapp.count(xa.id)) {
                errors.push_back(cn.id + ".var_cost_xapp is missing an entry for " + xa.id);
            }
        }
    }

    // chain relation must be acyclic
    {
        IdMap<int> state; // 0 new, 1 in stack, 2 done
        bool cyclic = false;
        auto dfs = [&](auto&& self, const XAppSpec& xa) -> void {
            int& st = state[xa.id];
            if (st == 1) {
                cyclic = true;
                return;
            }
            if (st == 2) return;
            st = 1;
            for (const auto& c : xa.chain) {
                const XAppSpec* next = instance.find_xapp(c);
                if (next != nullptr) self(self, *next);
            }
            state[xa.id] = 2;
        };
        for (const auto& xa : instance.xapps) dfs(dfs, xa);
        if (cyclic) errors.push_back("xapps.chain relation contains a cycle");
    }

    // graph coverage and shape
    const auto& g = instance.graph;
    const std::size_t n = g.node_order().size();
    if (g.matrix().size() != n * n) {
        errors.push_back("graph.latency size does not match node_order");
        return errors;
    }
    for (const auto& cn : instance.compute_nodes) {
        if (!g.has_node(cn.id)) errors.push_back("graph.node_order is missing compute node " + cn.id);
    }
    for (const auto& e2 : instance.e2_nodes) {
        if (!g.has_node(e2.id)) errors.push_back("graph.node_order is missing E2 node " + e2.id);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (g.matrix()[i * n + i] != 0.0) {
            errors.push_back("graph.latency has nonzero diagonal at " + g.node_order()[i]);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double ij = g.matrix()[i * n + j];
            const double ji = g.matrix()[j * n + i];
            if (ij != ji) {
                errors.push_back("graph.latency not symmetric between " + g.node_order()[i] + " and " +
                                 g.node_order()[j]);
            }
            if (std::isnan(ij) || ij < 0.0) {
                errors.push_back("graph.latency negative or NaN between " + g.node_order()[i] + " and " +
                                 g.node_order()[j]);
            }
        }
    }
    // finite where the model needs it: E2-CN and CN-CN
    for (const auto& a : instance.compute_nodes) {
        if (!g.has_node(a.id)) continue;
        for (const auto& b : instance.compute_nodes) {
            if (!g.has_node(b.id)) continue;
            if (!std::isfinite(g.latency(a.id, b.id))) {
                errors.push_back("graph.latency must be finite between CNs " + a.id + " and " + b.id);
            }
        }
    }
    for (const auto& e2 : instance.e2_nodes) {
        if (!g.has_node(e2.id)) continue;
        for (const auto& cn : instance.compute_nodes) {
            if (!g.has_node(cn.id)) continue;
            if (!std::isfinite(g.latency(e2.id, cn.id))) {
                errors.push_back("graph.latency must be finite between " + e2.id + " and " + cn.id);
            }
        }
    }

    return errors;
}

double control_loop_latency(const Instance& instance, const Solution& solution,
                            const std::string& e2, const std::string& xapp) {
    auto cit = solution.config.find(e2);
    if (cit == solution.config.end()) {
        throw MissingAssignmentError("no configuration assigned for E2 node " + e2);
    }
    const XAppSpec* xa = instance.find_xapp(xapp);
    if (xa == nullptr) throw MissingAssignmentError("unknown xApp " + xapp);
    SolutionHosts hosts{solution, e2, cit->second};
    return detail::eval_loop_latency(instance, e2, *xa, hosts);
}

double fixed_cost(const Instance& instance, const Solution& solution) {
    double sum = 0.0;
    for (const auto& id : solution.used) {
        const ComputeNode* cn = instance.find_cn(id);
        if (cn != nullptr) sum += cn->fixed_cost;
    }
    return sum;
}

double variable_cost(const Instance& instance, const Solution& solution) {
    double sum = 0.0;
    for (const auto& cn : instance.compute_nodes) {
        if (solution.ricman_on.count(cn.id)) sum += cn.var_cost_ricman;
        if (solution.e2t_on.count(cn.id)) sum += cn.var_cost_e2t;
        if (solution.sdl_on.count(cn.id)) sum += cn.var_cost_sdl;
        if (solution.nib_on.count(cn.id)) sum += cn.var_cost_nib;
        auto it = solution.xapp_on.find(cn.id);
        if (it != solution.xapp_on.end()) {
            for (const auto& xa : it->second) {
                auto cit = cn.var_cost_xapp.find(xa);
                if (cit != cn.var_cost_xapp.end()) sum += cit->second;
            }
        }
    }
    return sum;
}

double total_cost(const Instance& instance, const Solution& solution) {
    return fixed_cost(instance, solution) + variable_cost(instance, solution);
}

std::vector<Violation> check_feasible(const Instance& instance, const Solution& solution) {
    std::vector<Violation> out;

    // (a) totality of config and xapp_host
    IdSet incomplete_e2;
    for (const auto& e2 : instance.e2_nodes) {
        auto cit = solution.config.find(e2.id);
        if (cit == solution.config.end()) {
            out.push_back({ViolationKind::IncompleteAssignment, e2.id, 0.0, 0.0});
            incomplete_e2.insert(e2.id);
            continue;
        }
        const Configuration& cfg = cit->second;
        for (const std::string* host : {&cfg.r, &cfg.t, &cfg.s, &cfg.d}) {
            if (instance.find_cn(*host) == nullptr) {
                out.push_back({ViolationKind::IncompleteAssignment, e2.id, 0.0, 0.0});
                incomplete_e2.insert(e2.id);
                break;
            }
        }
    }
    std::vector<std::pair<std::string, std::string>> incomplete_pairs;
    for (const auto& e2 : instance.e2_nodes) {
        auto eit = solution.xapp_host.find(e2.id);
        for (const auto& xa : instance.xapps) {
            const std::string* host = nullptr;
            if (eit != solution.xapp_host.end()) {
                auto xit = eit->second.find(xa.id);
                if (xit != eit->second.end()) host = &xit->second;
            }
            if (host == nullptr || instance.find_cn(*host) == nullptr) {
                out.push_back({ViolationKind::IncompleteAssignment, e2.id + "/" + xa.id, 0.0, 0.0});
                incomplete_pairs.emplace_back(e2.id, xa.id);
            }
        }
    }

    auto pair_incomplete = [&](const std::string& e2, const XAppSpec& xa) {
        if (incomplete_e2.count(e2)) return true;
        for (const auto& p : incomplete_pairs) {
            if (p.first == e2 && (p.second == xa.id ||
                                  std::find(xa.chain.begin(), xa.chain.end(), p.second) != xa.chain.end())) {
                return true;
            }
        }
        return false;
    };

    // (b) control loop thresholds
    for (const auto& e2 : instance.e2_nodes) {
        for (const auto& xa : instance.xapps) {
            if (pair_incomplete(e2.id, xa)) continue;
            const double lat = control_loop_latency(instance, solution, e2.id, xa.id);
            if (lat > xa.rho_ms) {
                out.push_back({ViolationKind::LatencyExceeded, e2.id + "/" + xa.id, lat, xa.rho_ms});
            }
        }
    }

    // (c) per-CN capacities under instance sharing
    const DerivedView view = derive_view(solution);
    for (const auto& cn : instance.compute_nodes) {
        ResourceVec load;
        auto add = [&load](const ResourceVec& d) {
            load.proc += d.proc;
            load.mem += d.mem;
            load.sto += d.sto;
        };
        if (view.ricman_on.count(cn.id)) add(instance.demands.ricman);
        if (view.e2t_on.count(cn.id)) add(instance.demands.e2t);
        if (view.sdl_on.count(cn.id)) add(instance.demands.sdl);
        if (view.nib_on.count(cn.id)) add(instance.demands.nib);
        auto it = view.xapp_on.find(cn.id);
        if (it != view.xapp_on.end()) {
            for (const auto& xa_id : it->second) {
                const XAppSpec* xa = instance.find_xapp(xa_id);
                if (xa != nullptr) add(xa->demands);
            }
        }
        if (!cn.proc_capacity.fits(load.proc)) {
            out.push_back({ViolationKind::ProcOverflow, cn.id, load.proc, cn.proc_capacity.value()});
        }
        if (!cn.mem_capacity.fits(load.mem)) {
            out.push_back({ViolationKind::MemOverflow, cn.id, load.mem, cn.mem_capacity.value()});
        }
        if (!cn.sto_capacity.fits(load.sto)) {
            out.push_back({ViolationKind::StoOverflow, cn.id, load.sto, cn.sto_capacity.value()});
        }
    }

    return out;
}

IdSet loop_hosts(const Instance& instance, const Solution& solution,
                 const std::string& e2, const std::string& xapp) {
    IdSet hosts;
    auto cit = solution.config.find(e2);
    if (cit == solution.config.end()) {
        throw MissingAssignmentError("no configuration assigned for E2 node " + e2);
    }
    const XAppSpec* xa = instance.find_xapp(xapp);
    if (xa == nullptr) throw MissingAssignmentError("unknown xApp " + xapp);
    SolutionHosts view{solution, e2, cit->second};
    hosts.insert(cit->second.t);
    hosts.insert(view.xapp(xa->id));
    if (xa->needs_data) {
        hosts.insert(cit->second.s);
        hosts.insert(cit->second.d);
    }
    for (const auto& c : xa->chain) {
        hosts.insert(view.xapp(c));
        const XAppSpec* next = instance.find_xapp(c);
        if (next != nullptr && next->needs_data) {
            hosts.insert(cit->second.s);
            hosts.insert(cit->second.d);
        }
    }
    return hosts;
}

} // namespace rico
