#pragma once

#include <map>
#include <set>
#include <span>
#include <tuple>

#include "detsynth/global.hpp"

namespace detsynth {

// Plant with transitions relabeled by what each site receives: an m-tuple
// holding the event for every observing site and eps elsewhere. Tuples are
// stored as vectors of original event indices with label_eps for silence.
struct observation_automaton {
    plant go;
    std::vector<std::vector<int>> components; // per go event: m received entries
    std::vector<event_idx> event_map;         // original event -> go event
    event_idx silent_event = -1;              // the all-eps tuple, when present
};

observation_automaton build_go(const plant& p);

// Locally modified system: per-cost copies of the observation automaton with
// per-site deletion/replacement rewrites of each tuple and single-site
// insertion self-loops, each charged against the shared budget.
struct local_modified {
    plant product;
    int cost_bound = 0;
    std::vector<std::vector<state_idx>> encode_table;
    std::vector<std::pair<state_idx, int>> decode_table;
    std::vector<std::vector<int>> components; // per product event: m received entries
    std::map<std::vector<int>, event_idx> tuple_index;
    event_idx silent_event = -1; // all-eps tuple
    std::set<std::tuple<state_idx, event_idx, state_idx>> error_edges;

    state_idx encode(state_idx q, int c) const { return encode_table[q][c]; }
    std::pair<state_idx, int> decode(state_idx s) const { return decode_table[s]; }
    state_set encode_initial(const state_set& q0) const;
    estimate_set decode_set(const state_set& s) const;
};

local_modified build_gl(const plant& p, const observation_automaton& obs,
                        const local_erm_set& tables);

// Simultaneous head release of the multi-sequence builder: every non-silent
// tuple component must head its site's sequence and is removed. The all-eps
// tuple is not a release symbol.
std::optional<si_state> ms_release(const si_state& tau, std::span<const int> tuple);

// Total number of events still held across all sites; orders the estimation
// schedule.
int counting(const si_state& tau);

// Pairs of (possible original, received) events a site admits at the head of
// its remaining sequence. Deletion pairs do not depend on the head.
struct release_list {
    std::vector<std::pair<int, int>> deletions;    // (event, eps)
    std::vector<std::pair<int, int>> replacements; // (event, head)
    std::vector<std::pair<int, int>> insertions;   // (eps, head)
    std::vector<std::pair<int, int>> errorless;    // {(head, head)} or empty

    std::vector<std::pair<int, int>> all() const;
};

release_list make_release_list(const plant& p, const erm_binding& site_table, int site,
                               std::span<const event_idx> seq);

// Release transition of the local error-tolerant sequence builder. original
// is an event index or label_eps (single-site insertion hypothesis); received
// holds one entry per site. nullopt when not defined.
std::optional<costed_si> elts_release(const plant& p, const local_erm_set& tables,
                                      const costed_si& node, int original,
                                      std::span<const int> received);

// Method A: release received tuples over the locally modified system.
synchronizer build_el_synchronizer(const plant& p, const local_erm_set& tables,
                                   const si_state& tau, const state_set& q0);
estimate_set estimate_local_system(const plant& p, const local_erm_set& tables,
                                   const si_state& tau, const state_set& q0);

// Method B: infer original observations directly on the plant.
synchronizer build_elt_synchronizer(const plant& p, const local_erm_set& tables,
                                    const si_state& tau, const state_set& q0);
estimate_set estimate_local_builder(const plant& p, const local_erm_set& tables,
                                    const si_state& tau, const state_set& q0);

synchronizer build_elts_raw(const plant& p, const local_erm_set& tables, const si_state& tau);

extraction extract_leto(const synchronizer& s, size_t path_limit = 1u << 20);

} // namespace detsynth
