#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "detsynth/erm.hpp"
#include "detsynth/sistate.hpp"

namespace detsynth {

enum class sync_kind { plain, eg, el, egt, elt };

std::string to_string(sync_kind k);

// (plant state, accumulated cost) pairs; sorted, duplicate-free.
using estimate_pair = std::pair<state_idx, int>;
using estimate_set = std::vector<estimate_pair>;

estimate_set normalize_estimates(estimate_set est);

// Transition label of a synchronizer or builder.
//   plain/eg : received = {event}
//   el       : received = per-site tuple (label_eps for silent components)
//   egt      : original = event or label_eps, received = {event or label_eps}
//   elt      : original = event or label_eps, received = per-site tuple
inline constexpr int label_eps = -1;
inline constexpr int label_none = -2;

struct sync_label {
    int original = label_none;
    std::vector<int> received;
    auto operator<=>(const sync_label&) const = default;
};

struct sync_node {
    si_state tau;
    int cost = 0;
    bool ending = false;
};

struct sync_edge {
    int src = 0;
    int dst = 0;
    sync_label label;
    bool error = false; // label embodies an error action
};

// Release structure with optional per-node state estimates. Nodes and edges
// are stored in creation order of the deterministic construction schedule,
// so two builds from identical inputs are identical structures.
struct synchronizer {
    sync_kind kind = sync_kind::plain;
    int num_sites = 1;
    int root = 0;
    std::vector<sync_node> nodes;
    std::vector<sync_edge> edges;
    std::vector<std::vector<int>> in_edges; // per node, edge ids
    bool has_estimates = false;
    std::vector<state_set> estimates; // model-state sets; meaning depends on kind
    // Estimates resolved to (plant state, cost) pairs: the model cost for
    // structures over modified systems, the node's own cost otherwise.
    std::vector<estimate_set> decoded;
    std::vector<int> ending; // node ids with empty tau, sorted by cost
};

struct release_candidate {
    sync_label label;
    si_state next_tau;
    int cost_delta = 0;
    bool error = false;
};

// Candidates must be guarded by the estimate when one is supplied (nullptr
// during raw builder construction).
using release_fn =
    std::function<std::vector<release_candidate>(const sync_node&, const state_set* estimate)>;
using update_fn = std::function<state_set(const state_set&, const sync_label&)>;

// Estimation-by-release construction. Nodes are processed level by level in
// descending total remaining length; within a level, nodes sharing a tau are
// handled in ascending cost order, which is exactly the order in which their
// incoming edges can still appear (cost-raising edges never leave a tau, and
// every other edge strictly shrinks it). A node is estimated once, when all
// its incoming edges exist, and released immediately afterwards.
synchronizer build_by_release(sync_kind kind, int num_sites, si_state root_tau,
                              std::optional<state_set> root_estimate, const release_fn& releases,
                              const update_fn& update);

// Per-edge length/cost monotonicity audit; returns a diagnostic per violation.
std::vector<std::string> audit_monotonic(const synchronizer& s);

// Estimate assigned to the all-empty ending node of a costless synchronizer,
// or an empty set when that node was never reached.
state_set ending_estimate(const synchronizer& s);

// Marked-path label extraction: the sequence of first label components along
// every root-to-ending path, paired with the ending cost. `complete` is false
// when path_limit stopped the enumeration.
struct extraction {
    std::vector<costed_seq> sequences; // syms are plant event indices
    bool complete = true;
};
extraction extract_marked(const synchronizer& s, size_t path_limit);

// Error-free estimation under the release protocol: the state estimate after
// the coordinator fuses tau, starting from q0.
state_set estimate_error_free(const plant& p, const si_state& tau, const state_set& q0);
synchronizer build_plain_synchronizer(const plant& p, const si_state& tau, const state_set& q0);

} // namespace detsynth
