#pragma once

#include "detsynth/local.hpp"

namespace detsynth {

// Enumeration limits. The oracle refuses to run when an instance could have
// witnesses beyond the caps; it never truncates silently.
struct oracle_caps {
    int max_run_length = 8;       // bound on |P(u)| over the union alphabet
    int max_component_length = 8; // bound on each received component
    int max_cost = 8;             // bound on the admissible budget
    size_t max_nodes = 1u << 22;  // visited observation prefixes
};

// Ground truth by exhaustive enumeration of plant observations and tamper
// scripts, straight from the problem statements.
estimate_set oracle_global(const plant& p, const erm& table, const si_state& tau,
                           const state_set& q0, const oracle_caps& caps = {});
estimate_set oracle_local(const plant& p, const local_erm_set& tables, const si_state& tau,
                          const state_set& q0, const oracle_caps& caps = {});

// Original-observation candidates with costs, by direct enumeration over the
// union alphabet. Without q0 this is exactly the defining set, equal to the
// marked-path extraction of the raw builder. With q0 the enumeration keeps
// only sequences the plant can produce from q0; that is a lower bound for a
// pruned synchronizer's extraction, whose shared nodes may merge feasibility
// from sibling paths.
std::vector<costed_seq> oracle_geto(const plant& p, const erm& table, const si_state& tau,
                                    const oracle_caps& caps = {},
                                    const state_set* q0 = nullptr);
std::vector<costed_seq> oracle_leto(const plant& p, const local_erm_set& tables,
                                    const si_state& tau, const oracle_caps& caps = {},
                                    const state_set* q0 = nullptr);

} // namespace detsynth
