#ifndef RICO_HEURISTIC_HPP
#define RICO_HEURISTIC_HPP

#include <memory>
#include <string>
#include <vector>

#include "rico/model.hpp"
#include "rico/util.hpp"

namespace rico {

enum class ComponentClass { RicMan, E2T, Xapp, Sdl, Nib };

std::string to_string(ComponentClass cls);

// One placeable component of an E2 node's control loop. For Xapp the xapp_id
// selects which application.
struct ComponentRef {
    ComponentClass cls = ComponentClass::E2T;
    std::string xapp_id;

    std::string label() const {
        return cls == ComponentClass::Xapp ? "xapp:" + xapp_id : to_string(cls);
    }

    bool operator==(const ComponentRef&) const = default;
};

// Latency-ordered component sequence of one E2 node: E2T first, then each
// xApp in declared order, then SDL/STSL, then NIBs. RIC_Man sits outside
// the loop and is handled separately.
std::vector<ComponentRef> ordered_loop_components(const Instance& instance);

// Mutable working placement shared by the greedy phases. Tracks per-CN
// resource usage and running cost with reference counts per (CN, component
// class) pair, so a shared instance is charged and sized exactly once and
// released only when its last serving E2 node departs.
class PlacementState {
public:
    explicit PlacementState(const Instance& instance);
    PlacementState(const PlacementState&) = delete;
    PlacementState& operator=(const PlacementState&) = delete;
    PlacementState(PlacementState&&) noexcept;
    PlacementState& operator=(PlacementState&&) noexcept;
    ~PlacementState();

    const Instance& instance() const;

    // Empty string while unplaced.
    std::string host(const std::string& e2, const ComponentRef& comp) const;

    // Capacity probe, sharing-aware. Each call counts one feasibility probe.
    bool can_place(const ComponentRef& comp, const std::string& cn) const;

    void place(const std::string& e2, const ComponentRef& comp, const std::string& cn);

    // Change in total cost if (e2, comp) moved to `cn`, under sharing.
    double move_cost_delta(const std::string& e2, const ComponentRef& comp,
                           const std::string& cn) const;

    // Would every control loop of `e2` still meet its threshold after the
    // tentative move? RIC_Man moves never affect loops.
    bool loops_ok_after_move(const std::string& e2, const ComponentRef& comp,
                             const std::string& cn) const;

    void move(const std::string& e2, const ComponentRef& comp, const std::string& cn);

    // Consolidation-pass protocol. While a pass is open for an E2 node, the
    // latency check for a tentative move only counts loop segments between
    // components already re-placed (plus the moving one); end_replace_pass
    // runs the full-loop check and rolls every component of that E2 node back
    // to its pass-start host when any threshold fails. Returns true when the
    // migrated placement was kept.
    void begin_replace_pass(const std::string& e2);
    void mark_final(const std::string& e2, const ComponentRef& comp);
    bool end_replace_pass(const std::string& e2);

    double cost() const;
    long long probes() const;

    Solution to_solution() const;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

// Nearest CN with enough remaining capacity for the component. E2T distance
// is measured from the E2 node; every later component from the host of its
// upstream neighbour in the loop order. Ties break toward lower fixed cost,
// then lower CN id. Throws NoFeasibleCnError when nothing fits.
std::string closest_cn(const Instance& instance, const std::string& e2,
                       const ComponentRef& comp, const PlacementState& partial);

// All CNs ordered by descending fixed-plus-component cost; ties by
// descending id. The cheapest candidate is last.
std::vector<std::string> sort_by_decreasing_cost(const ComponentRef& comp,
                                                 const Instance& instance);

// Greedy consolidation step: scans cost_ordered from its cheap end and moves
// the component to the first CN that fits and keeps every affected loop
// within threshold (skipped for RIC_Man). Stops at the current host; returns
// the possibly unchanged host. Inside an open consolidation pass the latency
// check only counts segments between already-re-placed components.
std::string re_place(const std::string& e2, const ComponentRef& comp,
                     const std::vector<std::string>& cost_ordered, PlacementState& working);

struct PhaseLogEntry {
    int phase = 1;
    std::string e2;
    std::string component;
    std::string from; // empty for initial placements
    std::string to;
};

struct HeuristicResult {
    Solution solution;
    long long probe_count = 0;
    std::vector<PhaseLogEntry> log;
};

// Two-phase greedy placement: latency-first initial placement of every loop
// component (RIC_Man starts on the cloud node), then per-E2 cost
// consolidation via re_place. Deterministic. Throws HeuristicInfeasibleError
// with the phase-1 violations when the initial placement misses a threshold
// or runs out of capacity.
HeuristicResult solve_heuristic(const Instance& instance, CancelToken cancel = {});

} // namespace rico

#endif
