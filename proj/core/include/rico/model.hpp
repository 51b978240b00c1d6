#ifndef RICO_MODEL_HPP
#define RICO_MODEL_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rico/util.hpp"

namespace rico {

// A resource capacity that is either a positive amount or unbounded (the
// cloud node). Kept as an explicit sentinel so overflow checks stay exact.
class Capacity {
public:
    Capacity() = default;

    static Capacity unbounded() {
        Capacity c;
        c.unbounded_ = true;
        return c;
    }

    static Capacity of(double value) {
        Capacity c;
        c.value_ = value;
        return c;
    }

    bool is_unbounded() const { return unbounded_; }

    double value() const { return value_; }

    bool fits(double load) const { return unbounded_ || load <= value_; }

private:
    double value_ = 0.0;
    bool unbounded_ = false;
};

struct ResourceVec {
    double proc = 0.0;
    double mem = 0.0;
    double sto = 0.0;
};

// Edge or cloud computing node. Tier 0 marks the cloud node; exactly one
// per instance, with unbounded capacities.
struct ComputeNode {
    std::string id;
    int tier = 0;
    Capacity proc_capacity;
    Capacity mem_capacity;
    Capacity sto_capacity;
    double fixed_cost = 0.0;
    double var_cost_ricman = 0.0;
    double var_cost_e2t = 0.0;
    double var_cost_sdl = 0.0;
    double var_cost_nib = 0.0;
    IdMap<double> var_cost_xapp; // per xApp id
};

struct E2Node {
    std::string id;
    int tier = 0; // attachment tier for generated topologies
};

// Dense symmetric matrix of one-way link latencies (ms) over every node id,
// compute and E2 alike. The diagonal is zero: components sharing a node
// communicate for free.
class OverlayGraph {
public:
    OverlayGraph() = default;
    explicit OverlayGraph(std::vector<std::string> node_order);

    const std::vector<std::string>& node_order() const { return node_order_; }
    const std::vector<double>& matrix() const { return latency_; }

    bool has_node(const std::string& id) const { return index_.count(id) > 0; }
    int index_of(const std::string& id) const;

    double latency(const std::string& a, const std::string& b) const;
    double latency_by_index(int a, int b) const { return latency_[static_cast<std::size_t>(a) * node_order_.size() + b]; }

    // Sets both directions; diagonal writes are rejected for nonzero values.
    void set_latency(const std::string& a, const std::string& b, double ms);
    void set_latency_by_index(int a, int b, double ms);

    void load_row_major(std::vector<double> values); // size must be n*n

private:
    std::vector<std::string> node_order_;
    std::unordered_map<std::string, int> index_;
    std::vector<double> latency_;
};

// Per-class resource demands shared by every instance of that class.
struct ComponentDemands {
    ResourceVec ricman;
    ResourceVec e2t;
    ResourceVec sdl;
    ResourceVec nib;
};

struct XAppSpec {
    std::string id;
    double rho_ms = 0.0;            // control loop threshold
    bool needs_data = false;        // accesses SDL/STSL and NIBs inside the loop
    std::vector<std::string> chain; // downstream xApps called in order
    ResourceVec demands;
};

struct Instance {
    OverlayGraph graph;
    std::vector<E2Node> e2_nodes;
    std::vector<ComputeNode> compute_nodes;
    ComponentDemands demands;
    std::vector<XAppSpec> xapps;
    // Stored latencies are one-way; a control loop traverses its path out and
    // back, so evaluated loops are scaled by this factor. 1.0 evaluates the
    // one-way segment sum only.
    double round_trip_factor = 2.0;

    const ComputeNode* find_cn(const std::string& id) const;
    const XAppSpec* find_xapp(const std::string& id) const;
    const E2Node* find_e2(const std::string& id) const;
    const ComputeNode* cloud() const; // first tier-0 node, nullptr if none
    double min_rho() const;
};

// Hosts of the four atomic groups serving one E2 node.
struct Configuration {
    std::string r; // RIC_Man
    std::string t; // E2T
    std::string s; // SDL/STSL
    std::string d; // NIBs

    bool operator==(const Configuration&) const = default;
};

// Assignment of components to compute nodes plus the indicator sets and
// costs derived from it. The raw maps are authoritative; rederive() fills
// everything else.
struct Solution {
    IdMap<Configuration> config;            // E2 id -> hosts
    IdMap<IdMap<std::string>> xapp_host;    // E2 id -> xApp id -> CN id

    IdSet used;
    IdSet ricman_on;
    IdSet e2t_on;
    IdSet sdl_on;
    IdSet nib_on;
    IdMap<IdSet> xapp_on;                   // CN id -> xApp ids with an instance there
    double fixed_cost = 0.0;
    double variable_cost = 0.0;
    double total_cost = 0.0;

    void rederive(const Instance& instance);

    bool same_assignment(const Solution& other) const {
        return config == other.config && xapp_host == other.xapp_host;
    }

    std::string canonical() const;
    std::uint64_t hash() const { return fnv1a64(canonical()); }
};

enum class ViolationKind {
    LatencyExceeded,
    ProcOverflow,
    MemOverflow,
    StoOverflow,
    IncompleteAssignment,
};

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string subject; // E2 id, CN id, or "e2/xapp"
    double measured = 0.0;
    double limit = 0.0;
};

struct MissingAssignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoFeasibleCnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HeuristicInfeasibleError : std::runtime_error {
    explicit HeuristicInfeasibleError(std::vector<Violation> v)
        : std::runtime_error("heuristic found no feasible placement"), violations(std::move(v)) {}
    std::vector<Violation> violations;
};

struct SimInfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CloudCrashError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structural validation. Returns one message per violated invariant; an
// empty list means the instance is well formed.
std::vector<std::string> validate_instance(const Instance& instance);

// Round-trip control loop latency for (e2, xapp) under the given solution:
// E2 -> E2T -> xApp (-> SDL -> NIB when the xApp needs data), then each
// chained hop with its own data access, all scaled by round_trip_factor.
// Throws MissingAssignmentError when a required host is unassigned.
double control_loop_latency(const Instance& instance, const Solution& solution,
                            const std::string& e2, const std::string& xapp);

// Activation cost of every used CN. Reads the derived indicator sets.
double fixed_cost(const Instance& instance, const Solution& solution);

// Per-class running costs; each class on a CN is billed once no matter how
// many E2 nodes it serves.
double variable_cost(const Instance& instance, const Solution& solution);

double total_cost(const Instance& instance, const Solution& solution);

// Checks assignment totality, every control loop threshold, and per-CN
// resource capacities (demand counted once per class under sharing).
// Works from the raw assignment maps; stored indicators are not trusted.
std::vector<Violation> check_feasible(const Instance& instance, const Solution& solution);

// CN ids traversed by the (e2, xapp) control loop: E2T, xApp host, SDL and
// NIB hosts when data is needed, and chain hosts. RIC_Man is not on the path.
IdSet loop_hosts(const Instance& instance, const Solution& solution,
                 const std::string& e2, const std::string& xapp);

namespace detail {

// Shared segment-sum evaluator. Hosts must provide:
//   const std::string& t() / s() / d();
//   const std::string& xapp(const std::string& id);  (throws if unassigned)
template <typename Hosts>
double eval_loop_latency(const Instance& in, const std::string& e2,
                         const XAppSpec& xa, const Hosts& hosts) {
    const OverlayGraph& g = in.graph;
    const std::string& t = hosts.t();
    const std::string& s = hosts.s();
    const std::string& d = hosts.d();
    const std::string& h0 = hosts.xapp(xa.id);

    double sum = g.latency(e2, t) + g.latency(t, h0);
    if (xa.needs_data) sum += g.latency(h0, s) + g.latency(s, d);

    const std::string* prev = &h0;
    for (const std::string& next_id : xa.chain) {
        const XAppSpec* next = in.find_xapp(next_id);
        if (next == nullptr) throw MissingAssignmentError("unknown chained xApp " + next_id);
        const std::string& hn = hosts.xapp(next_id);
        sum += g.latency(*prev, hn);
        if (next->needs_data) sum += g.latency(hn, s) + g.latency(s, d);
        prev = &hn;
    }
    return in.round_trip_factor * sum;
}

} // namespace detail

} // namespace rico

#endif
