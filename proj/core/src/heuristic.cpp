#include "rico/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rico/detail/instance_index.hpp"

namespace rico {

namespace {

using detail::InstanceIndex;
using detail::kClassE2T;
using detail::kClassNib;
using detail::kClassRicMan;
using detail::kClassSdl;
using detail::kClassXappBase;

int class_of(const InstanceIndex& ix, const ComponentRef& comp) {
    switch (comp.cls) {
        case ComponentClass::RicMan: return kClassRicMan;
        case ComponentClass::E2T: return kClassE2T;
        case ComponentClass::Sdl: return kClassSdl;
        case ComponentClass::Nib: return kClassNib;
        case ComponentClass::Xapp:
            for (int x = 0; x < ix.n_x; ++x) {
                if (ix.x_ids[x] == comp.xapp_id) return kClassXappBase + x;
            }
            throw std::invalid_argument("unknown xApp " + comp.xapp_id);
    }
    throw std::invalid_argument("bad component class");
}

} // namespace

std::string to_string(ComponentClass cls) {
    switch (cls) {
        case ComponentClass::RicMan: return "ric_man";
        case ComponentClass::E2T: return "e2t";
        case ComponentClass::Xapp: return "xapp";
        case ComponentClass::Sdl: return "sdl";
        case ComponentClass::Nib: return "nib";
    }
    return "?";
}

std::vector<ComponentRef> ordered_loop_components(const Instance& instance) {
    std::vector<ComponentRef> order;
    order.push_back({ComponentClass::E2T, ""});
    for (const auto& xa : instance.xapps) order.push_back({ComponentClass::Xapp, xa.id});
    order.push_back({ComponentClass::Sdl, ""});
    order.push_back({ComponentClass::Nib, ""});
    return order;
}

struct PlacementState::Impl {
    InstanceIndex ix;
    std::vector<std::vector<int>> host;       // [e2][class] -> cn or -1
    std::vector<std::vector<int>> act_count;  // [class][cn]
    std::vector<std::array<double, 3>> usage; // per cn
    std::vector<int> used_count;              // active classes per cn
    double cost_fixed = 0.0;
    double cost_var = 0.0;
    mutable long long probes = 0;
    std::unordered_map<std::string, int> e2_lookup, cn_lookup;

    // Active consolidation pass. While an E2 node migrates, loop segments
    // whose endpoints have not been re-placed yet are ignored; the final
    // full-loop check happens at end_replace_pass, with rollback on failure.
    int pass_e2 = -1;
    std::vector<char> pass_final;
    std::vector<int> pass_snapshot;

    explicit Impl(const Instance& instance) : ix(instance) {
        host.assign(ix.n_e2, std::vector<int>(ix.n_class, -1));
        act_count.assign(ix.n_class, std::vector<int>(ix.n_cn, 0));
        usage.assign(ix.n_cn, {0.0, 0.0, 0.0});
        used_count.assign(ix.n_cn, 0);
        for (int e = 0; e < ix.n_e2; ++e) e2_lookup.emplace(ix.e2_ids[e], e);
        for (int c = 0; c < ix.n_cn; ++c) cn_lookup.emplace(ix.cn_ids[c], c);
    }

    int e2_index(const std::string& id) const {
        auto it = e2_lookup.find(id);
        if (it == e2_lookup.end()) throw std::invalid_argument("unknown E2 node " + id);
        return it->second;
    }

    int cn_index(const std::string& id) const {
        auto it = cn_lookup.find(id);
        if (it == cn_lookup.end()) throw std::invalid_argument("unknown compute node " + id);
        return it->second;
    }

    bool fits(int cls, int cn) const {
        ++probes;
        if (act_count[cls][cn] > 0) return true;
        const auto& d = ix.demand[cls];
        const auto& cap = ix.cap[cn];
        return usage[cn][0] + d[0] <= cap[0] && usage[cn][1] + d[1] <= cap[1] &&
               usage[cn][2] + d[2] <= cap[2];
    }

    void attach(int cls, int cn) {
        if (act_count[cls][cn]++ == 0) {
            cost_var += ix.var_cost[cls][cn];
            const auto& d = ix.demand[cls];
            usage[cn][0] += d[0];
            usage[cn][1] += d[1];
            usage[cn][2] += d[2];
            if (used_count[cn]++ == 0) cost_fixed += ix.fixed[cn];
        }
    }

    void detach(int cls, int cn) {
        if (--act_count[cls][cn] == 0) {
            cost_var -= ix.var_cost[cls][cn];
            const auto& d = ix.demand[cls];
            usage[cn][0] -= d[0];
            usage[cn][1] -= d[1];
            usage[cn][2] -= d[2];
            if (--used_count[cn] == 0) cost_fixed -= ix.fixed[cn];
        }
    }

    double delta_of_move(int cls, int from, int to) const {
        if (from == to) return 0.0;
        double delta = 0.0;
        if (act_count[cls][to] == 0) {
            delta += ix.var_cost[cls][to];
            if (used_count[to] == 0) delta += ix.fixed[to];
        }
        if (from >= 0 && act_count[cls][from] == 1) {
            delta -= ix.var_cost[cls][from];
            if (used_count[from] == 1) delta -= ix.fixed[from];
        }
        return delta;
    }

    bool loops_ok(int e, int override_cls, int override_cn) const {
        auto h = [&](int cls) { return cls == override_cls ? override_cn : host[e][cls]; };
        const bool pass = pass_e2 == e;
        auto fin = [&](int cls) {
            return !pass || cls == override_cls || pass_final[static_cast<std::size_t>(cls)] != 0;
        };
        const int t = h(kClassE2T);
        const int s = h(kClassSdl);
        const int d = h(kClassNib);
        if (t < 0 || s < 0 || d < 0) {
            throw MissingAssignmentError("loop components of " + ix.e2_ids[e] + " not yet placed");
        }
        const bool ft = fin(kClassE2T);
        const bool fs = fin(kClassSdl);
        const bool fd = fin(kClassNib);
        for (int x = 0; x < ix.n_x; ++x) {
            const int hx = h(kClassXappBase + x);
            if (hx < 0) throw MissingAssignmentError("xApp " + ix.x_ids[x] + " not yet placed");
            const bool fx = fin(kClassXappBase + x);
            double sum = 0.0;
            if (ft) sum += ix.lat_e2_cn(e, t);
            if (ft && fx) sum += ix.lat_cn_cn(t, hx);
            if (ix.needs_data[x]) {
                if (fx && fs) sum += ix.lat_cn_cn(hx, s);
                if (fs && fd) sum += ix.lat_cn_cn(s, d);
            }
            int prev = hx;
            bool fprev = fx;
            for (int nx : ix.chain[x]) {
                const int hn = h(kClassXappBase + nx);
                if (hn < 0) throw MissingAssignmentError("xApp " + ix.x_ids[nx] + " not yet placed");
                const bool fn = fin(kClassXappBase + nx);
                if (fprev && fn) sum += ix.lat_cn_cn(prev, hn);
                if (ix.needs_data[nx]) {
                    if (fn && fs) sum += ix.lat_cn_cn(hn, s);
                    if (fs && fd) sum += ix.lat_cn_cn(s, d);
                }
                prev = hn;
                fprev = fn;
            }
            if (ix.rtf * sum > ix.rho[x]) return false;
        }
        return true;
    }
};

PlacementState::PlacementState(const Instance& instance)
    : impl_(std::make_unique<Impl>(instance)) {}
PlacementState::PlacementState(PlacementState&&) noexcept = default;
PlacementState& PlacementState::operator=(PlacementState&&) noexcept = default;
PlacementState::~PlacementState() = default;

const Instance& PlacementState::instance() const { return *impl_->ix.in; }

std::string PlacementState::host(const std::string& e2, const ComponentRef& comp) const {
    const int e = impl_->e2_index(e2);
    const int cls = class_of(impl_->ix, comp);
    const int cn = impl_->host[e][cls];
    return cn < 0 ? std::string{} : impl_->ix.cn_ids[cn];
}

bool PlacementState::can_place(const ComponentRef& comp, const std::string& cn) const {
    return impl_->fits(class_of(impl_->ix, comp), impl_->cn_index(cn));
}

void PlacementState::place(const std::string& e2, const ComponentRef& comp, const std::string& cn) {
    const int e = impl_->e2_index(e2);
    const int cls = class_of(impl_->ix, comp);
    const int c = impl_->cn_index(cn);
    if (impl_->host[e][cls] >= 0) throw std::logic_error("component already placed; use move");
    impl_->attach(cls, c);
    impl_->host[e][cls] = c;
}

double PlacementState::move_cost_delta(const std::string& e2, const ComponentRef& comp,
                                       const std::string& cn) const {
    const int e = impl_->e2_index(e2);
    const int cls = class_of(impl_->ix, comp);
    return impl_->delta_of_move(cls, impl_->host[e][cls], impl_->cn_index(cn));
}

bool PlacementState::loops_ok_after_move(const std::string& e2, const ComponentRef& comp,
                                         const std::string& cn) const {
    if (comp.cls == ComponentClass::RicMan) return true;
    const int e = impl_->e2_index(e2);
    const int cls = class_of(impl_->ix, comp);
    return impl_->loops_ok(e, cls, impl_->cn_index(cn));
}

void PlacementState::move(const std::string& e2, const ComponentRef& comp, const std::string& cn) {
    const int e = impl_->e2_index(e2);
    const int cls = class_of(impl_->ix, comp);
    const int to = impl_->cn_index(cn);
    const int from = impl_->host[e][cls];
    if (from == to) return;
    impl_->attach(cls, to);
    if (from >= 0) impl_->detach(cls, from);
    impl_->host[e][cls] = to;
}

void PlacementState::begin_replace_pass(const std::string& e2) {
    Impl& st = *impl_;
    if (st.pass_e2 >= 0) throw std::logic_error("a consolidation pass is already open");
    st.pass_e2 = st.e2_index(e2);
    st.pass_final.assign(static_cast<std::size_t>(st.ix.n_class), 0);
    st.pass_final[kClassRicMan] = 1; // never on the loop path
    st.pass_snapshot = st.host[st.pass_e2];
}

void PlacementState::mark_final(const std::string& e2, const ComponentRef& comp) {
    Impl& st = *impl_;
    if (st.pass_e2 != st.e2_index(e2)) throw std::logic_error("no open pass for " + e2);
    st.pass_final[static_cast<std::size_t>(class_of(st.ix, comp))] = 1;
}

bool PlacementState::end_replace_pass(const std::string& e2) {
    Impl& st = *impl_;
    const int e = st.e2_index(e2);
    if (st.pass_e2 != e) throw std::logic_error("no open pass for " + e2);
    st.pass_e2 = -1; // full-loop semantics from here on
    if (st.loops_ok(e, -1, -1)) return true;
    // restore the loop components; RIC_Man stays wherever it moved
    for (int cls = 0; cls < st.ix.n_class; ++cls) {
        if (cls == kClassRicMan) continue;
        const int want = st.pass_snapshot[cls];
        const int have = st.host[e][cls];
        if (want == have) continue;
        st.attach(cls, want);
        if (have >= 0) st.detach(cls, have);
        st.host[e][cls] = want;
    }
    return false;
}

double PlacementState::cost() const { return impl_->cost_fixed + impl_->cost_var; }

long long PlacementState::probes() const { return impl_->probes; }

Solution PlacementState::to_solution() const {
    Solution sol;
    const auto& ix = impl_->ix;
    for (int e = 0; e < ix.n_e2; ++e) {
        const auto& h = impl_->host[e];
        Configuration cfg;
        if (h[kClassRicMan] >= 0) cfg.r = ix.cn_ids[h[kClassRicMan]];
        if (h[kClassE2T] >= 0) cfg.t = ix.cn_ids[h[kClassE2T]];
        if (h[kClassSdl] >= 0) cfg.s = ix.cn_ids[h[kClassSdl]];
        if (h[kClassNib] >= 0) cfg.d = ix.cn_ids[h[kClassNib]];
        sol.config[ix.e2_ids[e]] = cfg;
        for (int x = 0; x < ix.n_x; ++x) {
            if (h[kClassXappBase + x] >= 0) {
                sol.xapp_host[ix.e2_ids[e]][ix.x_ids[x]] = ix.cn_ids[h[kClassXappBase + x]];
            }
        }
    }
    sol.rederive(*ix.in);
    return sol;
}

namespace {

std::vector<std::string> natural_cn_ids(const Instance& instance) {
    std::vector<std::string> ids;
    ids.reserve(instance.compute_nodes.size());
    for (const auto& cn : instance.compute_nodes) ids.push_back(cn.id);
    std::sort(ids.begin(), ids.end(), NaturalLess{});
    return ids;
}

// Host the component measures its distance from: the E2 node for E2T, the
// previous loop component's host for everything downstream.
std::string upstream_anchor(const Instance& instance, const std::string& e2,
                            const ComponentRef& comp, const PlacementState& partial) {
    if (comp.cls == ComponentClass::E2T) return e2;
    const auto order = ordered_loop_components(instance);
    auto it = std::find(order.begin(), order.end(), comp);
    if (it == order.end() || it == order.begin()) {
        throw std::invalid_argument("component " + comp.label() + " is not in the loop order");
    }
    const ComponentRef& upstream = *(it - 1);
    const std::string host = partial.host(e2, upstream);
    if (host.empty()) {
        throw MissingAssignmentError("upstream component " + upstream.label() + " of " + e2 +
                                     " is not placed yet");
    }
    return host;
}

double component_var_cost(const ComputeNode& cn, const ComponentRef& comp) {
    switch (comp.cls) {
        case ComponentClass::RicMan: return cn.var_cost_ricman;
        case ComponentClass::E2T: return cn.var_cost_e2t;
        case ComponentClass::Sdl: return cn.var_cost_sdl;
        case ComponentClass::Nib: return cn.var_cost_nib;
        case ComponentClass::Xapp: {
            auto it = cn.var_cost_xapp.find(comp.xapp_id);
            return it == cn.var_cost_xapp.end() ? 0.0 : it->second;
        }
    }
    return 0.0;
}

} // namespace

std::string closest_cn(const Instance& instance, const std::string& e2,
                       const ComponentRef& comp, const PlacementState& partial) {
    const std::string anchor = upstream_anchor(instance, e2, comp, partial);
    const std::vector<std::string> ids = natural_cn_ids(instance);
    int best = -1;
    double best_lat = 0.0;
    double best_fixed = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!partial.can_place(comp, ids[i])) continue;
        const double lat = instance.graph.latency(anchor, ids[i]);
        const double fixed = instance.find_cn(ids[i])->fixed_cost;
        if (best < 0 || lat < best_lat || (lat == best_lat && fixed < best_fixed)) {
            best = static_cast<int>(i);
            best_lat = lat;
            best_fixed = fixed;
        }
    }
    if (best < 0) {
        throw NoFeasibleCnError("no compute node has capacity for " + comp.label() + " of " + e2);
    }
    return ids[best];
}

std::vector<std::string> sort_by_decreasing_cost(const ComponentRef& comp,
                                                 const Instance& instance) {
    std::vector<std::string> ids = natural_cn_ids(instance);
    std::stable_sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
        const ComputeNode* ca = instance.find_cn(a);
        const ComputeNode* cb = instance.find_cn(b);
        const double cost_a = ca->fixed_cost + component_var_cost(*ca, comp);
        const double cost_b = cb->fixed_cost + component_var_cost(*cb, comp);
        if (cost_a != cost_b) return cost_a > cost_b;
        return natural_less(b, a); // descending id on ties
    });
    return ids;
}

std::string re_place(const std::string& e2, const ComponentRef& comp,
                     const std::vector<std::string>& cost_ordered, PlacementState& working) {
    const std::string current = working.host(e2, comp);
    if (current.empty()) {
        throw MissingAssignmentError("component " + comp.label() + " of " + e2 + " has no host yet");
    }
    for (auto it = cost_ordered.rbegin(); it != cost_ordered.rend(); ++it) {
        const std::string& cand = *it;
        if (cand == current) break; // nothing cheaper worked out
        if (!working.can_place(comp, cand)) continue;
        if (!working.loops_ok_after_move(e2, comp, cand)) continue;
        working.move(e2, comp, cand);
        return cand;
    }
    return current;
}

HeuristicResult solve_heuristic(const Instance& instance, CancelToken cancel) {
    const ComputeNode* cloud = instance.cloud();
    if (cloud == nullptr) throw std::invalid_argument("instance has no cloud node");

    std::vector<std::string> e2_ids;
    for (const auto& e2 : instance.e2_nodes) e2_ids.push_back(e2.id);
    std::sort(e2_ids.begin(), e2_ids.end(), NaturalLess{});

    const auto loop_order = ordered_loop_components(instance);
    const ComponentRef ric_man{ComponentClass::RicMan, ""};

    PlacementState state(instance);
    HeuristicResult result;

    // Phase 1: latency-first placement of every loop component; RIC_Man
    // starts on the cloud node.
    for (const auto& e2 : e2_ids) {
        state.place(e2, ric_man, cloud->id);
        result.log.push_back({1, e2, ric_man.label(), "", cloud->id});
        for (const auto& comp : loop_order) {
            std::string cn;
            try {
                cn = closest_cn(instance, e2, comp, state);
            } catch (const NoFeasibleCnError&) {
                std::vector<Violation> violations{
                    {ViolationKind::IncompleteAssignment, e2 + "/" + comp.label(), 0.0, 0.0}};
                throw HeuristicInfeasibleError(std::move(violations));
            }
            state.place(e2, comp, cn);
            result.log.push_back({1, e2, comp.label(), "", cn});
        }
        if (cancel.cancelled()) throw std::runtime_error("heuristic cancelled");
    }

    {
        Solution phase1 = state.to_solution();
        auto violations = check_feasible(instance, phase1);
        if (!violations.empty()) throw HeuristicInfeasibleError(std::move(violations));
    }

    // Phase 2: cost consolidation, cheapest candidates first.
    IdMap<std::vector<std::string>> cost_lists;
    cost_lists[ric_man.label()] = sort_by_decreasing_cost(ric_man, instance);
    for (const auto& comp : loop_order) {
        cost_lists[comp.label()] = sort_by_decreasing_cost(comp, instance);
    }

    const double phase1_cost = state.cost();
    IdMap<IdMap<std::string>> phase1_hosts;
    for (const auto& e2 : e2_ids) {
        phase1_hosts[e2][ric_man.label()] = state.host(e2, ric_man);
        for (const auto& comp : loop_order) phase1_hosts[e2][comp.label()] = state.host(e2, comp);
    }

    for (const auto& e2 : e2_ids) {
        state.begin_replace_pass(e2);
        const std::string r_from = state.host(e2, ric_man);
        const std::string r_to = re_place(e2, ric_man, cost_lists[ric_man.label()], state);
        if (r_to != r_from) result.log.push_back({2, e2, ric_man.label(), r_from, r_to});
        const std::size_t moves_before = result.log.size();
        for (const auto& comp : loop_order) {
            const std::string from = state.host(e2, comp);
            const std::string to = re_place(e2, comp, cost_lists[comp.label()], state);
            state.mark_final(e2, comp);
            if (to != from) result.log.push_back({2, e2, comp.label(), from, to});
        }
        if (!state.end_replace_pass(e2)) {
            result.log.resize(moves_before);
            result.log.push_back({2, e2, "rollback", "", ""});
        }
        if (cancel.cancelled()) throw std::runtime_error("heuristic cancelled");
    }

    // Greedy moves optimize a per-component proxy; if the pass as a whole
    // ended up costlier than the latency-first placement, keep the latter.
    if (state.cost() > phase1_cost + 1e-9) {
        for (const auto& e2 : e2_ids) {
            const std::string r_host = phase1_hosts[e2][ric_man.label()];
            if (state.host(e2, ric_man) != r_host) state.move(e2, ric_man, r_host);
            for (const auto& comp : loop_order) {
                const std::string& want = phase1_hosts[e2][comp.label()];
                if (state.host(e2, comp) != want) state.move(e2, comp, want);
            }
        }
        result.log.push_back({2, "", "phase2_reverted", "", ""});
    }

    result.solution = state.to_solution();
    result.probe_count = state.probes();
    return result;
}

} // namespace rico
