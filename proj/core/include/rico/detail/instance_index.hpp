#ifndef RICO_DETAIL_INSTANCE_INDEX_HPP
#define RICO_DETAIL_INSTANCE_INDEX_HPP

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <vector>

#include "rico/model.hpp"

namespace rico::detail {

// Component classes in tuple order, xApps appended after the fixed four.
inline constexpr int kClassRicMan = 0;
inline constexpr int kClassE2T = 1;
inline constexpr int kClassSdl = 2;
inline constexpr int kClassNib = 3;
inline constexpr int kClassXappBase = 4;

// Integer-indexed snapshot of an Instance used by the solvers. E2 nodes and
// CNs are ordered naturally by id; xApps keep their declared order.
struct InstanceIndex {
    const Instance* in = nullptr;
    int n_e2 = 0;
    int n_cn = 0;
    int n_x = 0;
    int n_class = 0; // 4 + n_x

    std::vector<std::string> e2_ids; // natural order
    std::vector<std::string> cn_ids; // natural order
    std::vector<std::string> x_ids;  // declared order
    std::vector<int> x_natural;      // positions of x_ids sorted naturally

    std::vector<int> e2_vertex;
    std::vector<int> cn_vertex;

    std::vector<double> fixed;                    // per CN
    std::vector<std::array<double, 3>> cap;      // per CN, inf if unbounded
    std::vector<std::vector<double>> var_cost;   // [class][cn]
    std::vector<std::array<double, 3>> demand;   // per class
    std::vector<double> min_var;                 // per class, min over CNs
    std::vector<double> rho;                     // per xApp
    std::vector<char> needs_data;                // per xApp
    std::vector<std::vector<int>> chain;         // per xApp, xApp indices
    double rtf = 2.0;
    double min_rho = std::numeric_limits<double>::infinity();

    explicit InstanceIndex(const Instance& instance) : in(&instance) {
        n_e2 = static_cast<int>(instance.e2_nodes.size());
        n_cn = static_cast<int>(instance.compute_nodes.size());
        n_x = static_cast<int>(instance.xapps.size());
        n_class = kClassXappBase + n_x;
        rtf = instance.round_trip_factor;

        for (const auto& e2 : instance.e2_nodes) e2_ids.push_back(e2.id);
        std::sort(e2_ids.begin(), e2_ids.end(), NaturalLess{});
        for (const auto& cn : instance.compute_nodes) cn_ids.push_back(cn.id);
        std::sort(cn_ids.begin(), cn_ids.end(), NaturalLess{});
        for (const auto& xa : instance.xapps) x_ids.push_back(xa.id);
        {
            std::vector<int> order(x_ids.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return natural_less(x_ids[a], x_ids[b]);
            });
            x_natural = order;
        }

        for (const auto& id : e2_ids) e2_vertex.push_back(instance.graph.index_of(id));
        for (const auto& id : cn_ids) cn_vertex.push_back(instance.graph.index_of(id));

        const double inf = std::numeric_limits<double>::infinity();
        fixed.resize(n_cn);
        cap.resize(n_cn);
        var_cost.assign(n_class, std::vector<double>(n_cn, 0.0));
        for (int c = 0; c < n_cn; ++c) {
            const ComputeNode& cn = *instance.find_cn(cn_ids[c]);
            fixed[c] = cn.fixed_cost;
            cap[c] = {cn.proc_capacity.is_unbounded() ? inf : cn.proc_capacity.value(),
                      cn.mem_capacity.is_unbounded() ? inf : cn.mem_capacity.value(),
                      cn.sto_capacity.is_unbounded() ? inf : cn.sto_capacity.value()};
            var_cost[kClassRicMan][c] = cn.var_cost_ricman;
            var_cost[kClassE2T][c] = cn.var_cost_e2t;
            var_cost[kClassSdl][c] = cn.var_cost_sdl;
            var_cost[kClassNib][c] = cn.var_cost_nib;
            for (int x = 0; x < n_x; ++x) {
                auto it = cn.var_cost_xapp.find(x_ids[x]);
                var_cost[kClassXappBase + x][c] = it == cn.var_cost_xapp.end() ? 0.0 : it->second;
            }
        }

        auto to_array = [](const ResourceVec& rv) {
            return std::array<double, 3>{rv.proc, rv.mem, rv.sto};
        };
        demand.resize(n_class);
        demand[kClassRicMan] = to_array(instance.demands.ricman);
        demand[kClassE2T] = to_array(instance.demands.e2t);
        demand[kClassSdl] = to_array(instance.demands.sdl);
        demand[kClassNib] = to_array(instance.demands.nib);

        rho.resize(n_x);
        needs_data.resize(n_x);
        chain.resize(n_x);
        for (int x = 0; x < n_x; ++x) {
            const XAppSpec& xa = instance.xapps[x];
            demand[kClassXappBase + x] = to_array(xa.demands);
            rho[x] = xa.rho_ms;
            needs_data[x] = xa.needs_data ? 1 : 0;
            min_rho = std::min(min_rho, xa.rho_ms);
            for (const auto& cid : xa.chain) {
                for (int y = 0; y < n_x; ++y) {
                    if (x_ids[y] == cid) {
                        chain[x].push_back(y);
                        break;
                    }
                }
            }
        }

        min_var.resize(n_class);
        for (int z = 0; z < n_class; ++z) {
            double m = std::numeric_limits<double>::infinity();
            for (int c = 0; c < n_cn; ++c) m = std::min(m, var_cost[z][c]);
            min_var[z] = m;
        }
    }

    double lat_e2_cn(int e, int c) const {
        return in->graph.latency_by_index(e2_vertex[e], cn_vertex[c]);
    }

    double lat_cn_cn(int a, int b) const {
        return in->graph.latency_by_index(cn_vertex[a], cn_vertex[b]);
    }
};

} // namespace rico::detail

#endif
