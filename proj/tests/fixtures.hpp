#pragma once

#include "detsynth/global.hpp"
#include "detsynth/local.hpp"

namespace fixtures {

using namespace detsynth;

// Two-site loop: s0 -u-> s1 -a-> s2 -b-> s0 with a at site 1, b at site 2.
inline plant f1() {
    return plant::make({"s0", "s1", "s2"}, {"s0"}, 2,
                       {{"a", {1}}, {"b", {2}}, {"u", {}}},
                       {{"s0", "u", "s1"}, {"s1", "a", "s2"}, {"s2", "b", "s0"}});
}

// Deletion of b and insertion of a, unit budget.
inline erm e2() {
    return erm({"a", "b"}, 1, {{"b", "eps", 1}, {"eps", "a", 1}});
}

// Site 1 may lose a, site 2 may dream up b; shared unit budget.
inline local_erm_set l1l2() {
    local_erm_set s;
    s.cost_bound = 1;
    s.per_site.push_back(erm({"a"}, 1, {{"a", "eps", 1}}));
    s.per_site.push_back(erm({"b"}, 1, {{"eps", "b", 1}}));
    return s;
}

// Three-site reference system with shared-observable events. The documented
// result sets that go with it live in test_ref_fixture; the transition
// relation is a best-effort reconstruction, so those sets are not gating.
inline plant ref_plant() {
    return plant::make(
        {"q0", "q1", "q2", "q3", "q4"}, {"q0"}, 3,
        {{"alpha12", {1, 2}}, {"beta13", {1, 3}}, {"sigma2", {2}}, {"gamma3", {3}}, {"v", {}}},
        {{"q0", "v", "q1"},
         {"q1", "alpha12", "q2"},
         {"q2", "sigma2", "q2"},
         {"q1", "sigma2", "q4"},
         {"q2", "beta13", "q3"},
         {"q3", "alpha12", "q2"},
         {"q3", "beta13", "q4"},
         {"q4", "gamma3", "q0"}});
}

// Four unit-cost error actions over the three-site alphabet, budget two.
inline erm ref_erm() {
    return erm({"alpha12", "beta13", "sigma2", "gamma3"}, 2,
               {{"eps", "alpha12", 1},
                {"alpha12", "sigma2", 1},
                {"beta13", "eps", 1},
                {"gamma3", "beta13", 1}});
}

inline local_erm_set ref_local_erms() {
    local_erm_set s;
    s.cost_bound = 2;
    s.per_site.push_back(
        erm({"alpha12", "beta13"}, 2, {{"eps", "alpha12", 1}, {"beta13", "eps", 1}}));
    s.per_site.push_back(erm({"alpha12", "sigma2"}, 2,
                             {{"eps", "alpha12", 1}, {"alpha12", "sigma2", 1}, {"sigma2", "eps", 1}}));
    s.per_site.push_back(
        erm({"beta13", "gamma3"}, 2, {{"beta13", "eps", 1}, {"gamma3", "beta13", 1}}));
    return s;
}

inline si_state si(const plant& p, const std::vector<std::vector<std::string>>& seqs) {
    return make_si_state(p, seqs);
}

inline state_set states(const plant& p, const std::vector<std::string>& names) {
    state_set r;
    for (const auto& n : names) r.push_back(p.require_state(n));
    return normalize(std::move(r));
}

inline estimate_set pairs(const plant& p,
                          const std::vector<std::pair<std::string, int>>& entries) {
    estimate_set r;
    for (const auto& [name, c] : entries) r.emplace_back(p.require_state(name), c);
    return normalize_estimates(std::move(r));
}

inline std::vector<event_idx> events(const plant& p, const std::vector<std::string>& names) {
    std::vector<event_idx> r;
    for (const auto& n : names) r.push_back(p.require_event(n));
    return r;
}

inline erm identity_global(const plant& p, int bound) {
    std::vector<std::string> alphabet;
    for (event_idx e : p.observable_events()) alphabet.push_back(p.event_name(e));
    return erm::identity(std::move(alphabet), bound);
}

inline local_erm_set identity_local(const plant& p, int bound) {
    local_erm_set s;
    s.cost_bound = bound;
    for (int site = 1; site <= p.num_sites(); ++site) {
        std::vector<std::string> alphabet;
        for (event_idx e : p.site_alphabet(site)) alphabet.push_back(p.event_name(e));
        s.per_site.push_back(erm::identity(std::move(alphabet), bound));
    }
    return s;
}

} // namespace fixtures
