#include "rico/exact.hpp"

#include <array>
#include <chrono>
#include <cmath>

#include "rico/detail/instance_index.hpp"

namespace rico {

namespace {

using detail::InstanceIndex;
using detail::kClassE2T;
using detail::kClassNib;
using detail::kClassRicMan;
using detail::kClassSdl;
using detail::kClassXappBase;

using Clock = std::chrono::steady_clock;

struct Slot {
    int e2 = 0;
    int cls = 0;
    bool full_check = false; // evaluate every loop of this E2 node here
};

// Depth-first branch and bound with committed-cost lower bounds. The same
// search core runs twice: once in branch order (E2T, xApps, SDL, NIBs,
// RIC_Man per E2 node) to prove the optimal cost, then in lexicographic key
// order (RIC_Man, E2T, SDL, NIBs, xApps by id) with the proven cost as a
// hard bound, so the first completed assignment is the canonical optimum.
class Search {
public:
    Search(const InstanceIndex& ix, const SolverBudget& budget, CancelToken cancel)
        : ix_(ix), budget_(budget), cancel_(std::move(cancel)), start_(Clock::now()) {
        assign_.assign(ix_.n_e2, std::vector<int>(ix_.n_class, -1));
        act_count_.assign(ix_.n_class, std::vector<int>(ix_.n_cn, 0));
        usage_.assign(ix_.n_cn, {0.0, 0.0, 0.0});
        used_count_.assign(ix_.n_cn, 0);
        act_total_.assign(ix_.n_class, 0);
        remaining_.assign(ix_.n_class, ix_.n_e2);
        node_limit_ = budget.node_limit.value_or(std::numeric_limits<long long>::max());
    }

    ExactResult run() {
        build_slots();

        phase2_ = false;
        dfs(0);

        ExactResult result;
        if (stopped_) {
            result.status = ExactStatus::Timeout;
        } else if (!has_best_) {
            result.status = ExactStatus::Infeasible;
        } else {
            result.status = ExactStatus::Optimal;
            // Lexicographic refinement among equal-cost optima.
            phase2_ = true;
            phase2_found_ = false;
            dfs(0);
            if (phase2_found_) best_assign_ = phase2_assign_;
        }
        if (has_best_) {
            result.best = to_solution(best_assign_);
            result.best_cost = result.best->total_cost;
        }
        result.explored_nodes = explored_;
        result.elapsed_s = std::chrono::duration<double>(Clock::now() - start_).count();
        return result;
    }

private:
    void build_slots() {
        slots_p1_.clear();
        slots_p2_.clear();
        for (int e = 0; e < ix_.n_e2; ++e) {
            slots_p1_.push_back({e, kClassE2T, false});
            for (int x = 0; x < ix_.n_x; ++x) slots_p1_.push_back({e, kClassXappBase + x, false});
            slots_p1_.push_back({e, kClassSdl, false});
            slots_p1_.push_back({e, kClassNib, true});
            slots_p1_.push_back({e, kClassRicMan, false});

            slots_p2_.push_back({e, kClassRicMan, false});
            slots_p2_.push_back({e, kClassE2T, false});
            slots_p2_.push_back({e, kClassSdl, false});
            slots_p2_.push_back({e, kClassNib, false});
            for (int k = 0; k < ix_.n_x; ++k) {
                Slot s{e, kClassXappBase + ix_.x_natural[k], k + 1 == ix_.n_x};
                slots_p2_.push_back(s);
            }
        }
    }

    bool out_of_budget() {
        if (explored_ >= node_limit_) return true;
        if (cancel_.cancelled()) return true;
        if ((explored_ & 0xfff) == 0) {
            const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
            if (elapsed > budget_.wall_time_limit_s) return true;
        }
        return false;
    }

    double lower_bound() const {
        double lb = cost_fixed_ + cost_var_;
        for (int z = 0; z < ix_.n_class; ++z) {
            if (act_total_[z] == 0 && remaining_[z] > 0) lb += ix_.min_var[z];
        }
        return lb;
    }

    bool capacity_ok(int cls, int cn) const {
        if (act_count_[cls][cn] > 0) return true;
        const auto& d = ix_.demand[cls];
        const auto& cap = ix_.cap[cn];
        return usage_[cn][0] + d[0] <= cap[0] && usage_[cn][1] + d[1] <= cap[1] &&
               usage_[cn][2] + d[2] <= cap[2];
    }

    // Latency screens valid for partial assignments; every term they drop is
    // nonnegative, so rejected candidates cannot be part of any feasible
    // completion of this E2 node.
    bool latency_screen(const Slot& slot, int cn) const {
        const int e = slot.e2;
        const auto& a = assign_[e];
        if (slot.cls == kClassE2T) {
            return ix_.rtf * ix_.lat_e2_cn(e, cn) <= ix_.min_rho;
        }
        if (slot.cls >= kClassXappBase) {
            const int x = slot.cls - kClassXappBase;
            const int t = a[kClassE2T];
            if (t < 0) return true;
            double sum = ix_.lat_e2_cn(e, t) + ix_.lat_cn_cn(t, cn);
            const int s = a[kClassSdl];
            const int d = a[kClassNib];
            if (ix_.needs_data[x] && s >= 0 && d >= 0) {
                sum += ix_.lat_cn_cn(cn, s) + ix_.lat_cn_cn(s, d);
            }
            return ix_.rtf * sum <= ix_.rho[x];
        }
        if (slot.cls == kClassNib) {
            const int t = a[kClassE2T];
            const int s = a[kClassSdl];
            if (t < 0 || s < 0) return true;
            for (int x = 0; x < ix_.n_x; ++x) {
                if (!ix_.needs_data[x]) continue;
                const double sum = ix_.lat_e2_cn(e, t) + ix_.lat_cn_cn(s, cn);
                if (ix_.rtf * sum > ix_.rho[x]) return false;
            }
            return true;
        }
        return true;
    }

    // Exact evaluation of all loops of an E2 node; hosts must be complete
    // except that `override_cls` is evaluated as `override_cn`.
    bool loops_ok(int e, int override_cls, int override_cn) const {
        const auto& a = assign_[e];
        auto host = [&](int cls) { return cls == override_cls ? override_cn : a[cls]; };
        const int t = host(kClassE2T);
        const int s = host(kClassSdl);
        const int d = host(kClassNib);
        for (int x = 0; x < ix_.n_x; ++x) {
            const int hx = host(kClassXappBase + x);
            double sum = ix_.lat_e2_cn(e, t) + ix_.lat_cn_cn(t, hx);
            if (ix_.needs_data[x]) sum += ix_.lat_cn_cn(hx, s) + ix_.lat_cn_cn(s, d);
            int prev = hx;
            for (int nx : ix_.chain[x]) {
                const int hn = host(kClassXappBase + nx);
                sum += ix_.lat_cn_cn(prev, hn);
                if (ix_.needs_data[nx]) sum += ix_.lat_cn_cn(hn, s) + ix_.lat_cn_cn(s, d);
                prev = hn;
            }
            if (ix_.rtf * sum > ix_.rho[x]) return false;
        }
        return true;
    }

    void do_assign(const Slot& slot, int cn) {
        assign_[slot.e2][slot.cls] = cn;
        --remaining_[slot.cls];
        if (act_count_[slot.cls][cn]++ == 0) {
            ++act_total_[slot.cls];
            cost_var_ += ix_.var_cost[slot.cls][cn];
            const auto& d = ix_.demand[slot.cls];
            usage_[cn][0] += d[0];
            usage_[cn][1] += d[1];
            usage_[cn][2] += d[2];
            if (used_count_[cn]++ == 0) cost_fixed_ += ix_.fixed[cn];
        }
    }

    void undo_assign(const Slot& slot, int cn) {
        assign_[slot.e2][slot.cls] = -1;
        ++remaining_[slot.cls];
        if (--act_count_[slot.cls][cn] == 0) {
            --act_total_[slot.cls];
            cost_var_ -= ix_.var_cost[slot.cls][cn];
            const auto& d = ix_.demand[slot.cls];
            usage_[cn][0] -= d[0];
            usage_[cn][1] -= d[1];
            usage_[cn][2] -= d[2];
            if (--used_count_[cn] == 0) cost_fixed_ -= ix_.fixed[cn];
        }
    }

    void dfs(std::size_t level) {
        const auto& slots = phase2_ ? slots_p2_ : slots_p1_;
        if (phase2_ ? phase2_found_ : false) return;
        if (level == slots.size()) {
            const double cost = cost_fixed_ + cost_var_;
            if (phase2_) {
                phase2_assign_ = assign_;
                phase2_found_ = true;
            } else if (!has_best_ || cost < best_cost_) {
                has_best_ = true;
                best_cost_ = cost;
                best_assign_ = assign_;
            }
            return;
        }
        const Slot& slot = slots[level];
        for (int cn = 0; cn < ix_.n_cn; ++cn) {
            ++explored_;
            if (out_of_budget()) {
                stopped_ = true;
                return;
            }
            if (!latency_screen(slot, cn)) continue;
            if (!capacity_ok(slot.cls, cn)) continue;
            if (slot.full_check && !loops_ok(slot.e2, slot.cls, cn)) continue;
            do_assign(slot, cn);
            const double lb = lower_bound();
            const bool prune = phase2_ ? lb > best_cost_ + kEps
                                       : (has_best_ && lb >= best_cost_);
            if (!prune) {
                dfs(level + 1);
            }
            undo_assign(slot, cn);
            if (stopped_ || (phase2_ && phase2_found_)) return;
        }
    }

    Solution to_solution(const std::vector<std::vector<int>>& assign) const {
        Solution sol;
        for (int e = 0; e < ix_.n_e2; ++e) {
            Configuration cfg;
            cfg.r = ix_.cn_ids[assign[e][kClassRicMan]];
            cfg.t = ix_.cn_ids[assign[e][kClassE2T]];
            cfg.s = ix_.cn_ids[assign[e][kClassSdl]];
            cfg.d = ix_.cn_ids[assign[e][kClassNib]];
            sol.config[ix_.e2_ids[e]] = cfg;
            for (int x = 0; x < ix_.n_x; ++x) {
                sol.xapp_host[ix_.e2_ids[e]][ix_.x_ids[x]] = ix_.cn_ids[assign[e][kClassXappBase + x]];
            }
        }
        sol.rederive(*ix_.in);
        return sol;
    }

    static constexpr double kEps = 1e-9;

    const InstanceIndex& ix_;
    const SolverBudget& budget_;
    CancelToken cancel_;
    Clock::time_point start_;

    std::vector<Slot> slots_p1_, slots_p2_;
    std::vector<std::vector<int>> assign_;
    std::vector<std::vector<int>> act_count_;
    std::vector<std::array<double, 3>> usage_;
    std::vector<int> used_count_;
    std::vector<int> act_total_;
    std::vector<int> remaining_;
    double cost_fixed_ = 0.0;
    double cost_var_ = 0.0;

    long long explored_ = 0;
    long long node_limit_ = 0;
    bool stopped_ = false;
    bool phase2_ = false;
    bool phase2_found_ = false;
    bool has_best_ = false;
    double best_cost_ = 0.0;
    std::vector<std::vector<int>> best_assign_;
    std::vector<std::vector<int>> phase2_assign_;
};

} // namespace

std::string to_string(ExactStatus status) {
    switch (status) {
        case ExactStatus::Optimal: return "Optimal";
        case ExactStatus::Timeout: return "Timeout";
        case ExactStatus::Infeasible: return "Infeasible";
    }
    return "?";
}

ExactResult solve_exact(const Instance& instance, const SolverBudget& budget, CancelToken cancel) {
    if (budget.wall_time_limit_s <= 0.0) throw std::invalid_argument("wall_time_limit_s must be > 0");
    InstanceIndex ix(instance);
    Search search(ix, budget, std::move(cancel));
    return search.run();
}

double estimate_search_space(int n_e2, int n_cn, int n_comp, int n_xapps) {
    if (n_e2 < 1 || n_cn < 1 || n_comp < 1 || n_xapps < 1) {
        throw std::invalid_argument("all counts must be >= 1");
    }
    const double base = static_cast<double>(n_e2) * static_cast<double>(n_cn);
    auto ipow = [](double b, int e) {
        double r = 1.0;
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    };
    return ipow(base, n_comp) + ipow(base, n_xapps);
}

} // namespace rico
