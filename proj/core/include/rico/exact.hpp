#ifndef RICO_EXACT_HPP
#define RICO_EXACT_HPP

#include <optional>
#include <string>

#include "rico/model.hpp"
#include "rico/util.hpp"

namespace rico {

struct SolverBudget {
    double wall_time_limit_s = 3600.0;
    std::optional<long long> node_limit;
};

enum class ExactStatus { Optimal, Timeout, Infeasible };

std::string to_string(ExactStatus status);

struct ExactResult {
    ExactStatus status = ExactStatus::Infeasible;
    std::optional<Solution> best;
    std::optional<double> best_cost;
    long long explored_nodes = 0;
    double elapsed_s = 0.0;
};

// Branch-and-bound over per-E2-node configuration tuples and per-(E2, xApp)
// hosts. When the search space is exhausted within budget the result is the
// minimum-cost feasible assignment; among equal-cost optima the returned one
// is lexicographically smallest by (E2 id, r, t, s, d, then xApp hosts in
// xApp id order), each host compared in natural CN id order.
//
// Cancellation is checked at every search node; a cancelled run reports
// Timeout with the incumbent found so far.
ExactResult solve_exact(const Instance& instance, const SolverBudget& budget,
                        CancelToken cancel = {});

// Size of the decision space, (n_e2*n_cn)^n_comp + (n_e2*n_cn)^n_xapps,
// as a double since it overflows integers quickly.
double estimate_search_space(int n_e2, int n_cn, int n_comp, int n_xapps);

} // namespace rico

#endif
