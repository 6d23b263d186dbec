#pragma once

#include <set>
#include <tuple>

#include "detsynth/erm.hpp"
#include "detsynth/synchronizer.hpp"

namespace detsynth {

// Keeps, per plant state, only the pairs carrying the minimal cost.
estimate_set least_cost_filter(const estimate_set& est);

// Plant lifted to (state, cost) pairs. Transitions carry either an original
// event, a received event standing in for a tampered one, or the silent
// deletion event; the cost component accumulates the tampering budget spent.
struct modified_plant {
    plant product;
    int cost_bound = 0;
    std::vector<std::vector<state_idx>> encode_table; // [orig state][cost] -> product state
    std::vector<std::pair<state_idx, int>> decode_table;
    std::vector<event_idx> event_map; // orig event -> product event
    event_idx deletion_event = -1;    // unobservable "eps" label; -1 when absent
    std::set<std::tuple<state_idx, event_idx, state_idx>> error_edges;

    state_idx encode(state_idx q, int c) const { return encode_table[q][c]; }
    std::pair<state_idx, int> decode(state_idx s) const { return decode_table[s]; }
    state_set encode_initial(const state_set& q0) const;
    estimate_set decode_set(const state_set& s) const;
};

// Globally modified system: per-cost copies of the plant, received-event
// relabelings at replacement cost, silent deletion moves, and insertion
// self-loops. The error table alphabet must equal the plant's observable
// alphabet.
modified_plant build_gg(const plant& p, const erm& table);

struct costed_si {
    si_state tau;
    int cost = 0;
    auto operator<=>(const costed_si&) const = default;
};

// Release transition of the global error-tolerant sequence builder. original
// and received use label_eps for eps; (eps, eps) is rejected. A deletion
// hypothesis (received == eps) keeps tau; otherwise the received event is
// released from tau. nullopt when not defined.
std::optional<costed_si> egts_release(const plant& p, const erm& table, const costed_si& node,
                                      int original, int received);

// Method A: release over the modified system's estimates.
synchronizer build_eg_synchronizer(const plant& p, const erm& table, const si_state& tau,
                                   const state_set& q0);
estimate_set estimate_global_system(const plant& p, const erm& table, const si_state& tau,
                                    const state_set& q0);

// Method B: infer matching original observations on the unmodified plant.
synchronizer build_egt_synchronizer(const plant& p, const erm& table, const si_state& tau,
                                    const state_set& q0);
estimate_set estimate_global_builder(const plant& p, const erm& table, const si_state& tau,
                                     const state_set& q0);

// Builder without feasibility pruning: every release the table admits.
synchronizer build_egts_raw(const plant& p, const erm& table, const si_state& tau);

// Original-observation candidates with costs read off the marked paths of an
// egt structure (synchronizer or raw builder).
extraction extract_geto(const synchronizer& s, size_t path_limit = 1u << 20);

} // namespace detsynth
