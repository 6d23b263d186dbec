#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "detsynth/plant.hpp"

namespace detsynth {

inline constexpr int default_component_cap = 32;

// Synchronization information state: one recorded observation sequence per
// site. The all-empty tuple is the distinguished ending state.
struct si_state {
    std::vector<std::vector<event_idx>> seqs;

    bool empty() const {
        for (const auto& s : seqs)
            if (!s.empty()) return false;
        return true;
    }
    int total_length() const {
        int n = 0;
        for (const auto& s : seqs) n += static_cast<int>(s.size());
        return n;
    }
    auto operator<=>(const si_state&) const = default;
};

// Validates per-site alphabets and the per-site length cap. Components use
// event names; the result carries event indices.
si_state make_si_state(const plant& p, const std::vector<std::vector<std::string>>& seqs,
                       int component_cap = default_component_cap);
si_state empty_si_state(const plant& p);

std::string to_string(const plant& p, const si_state& tau);

// Event release of the sequence builder: removes e from the head of every
// component whose site observes e. nullopt when some such head differs.
std::optional<si_state> sbuilder_release(const plant& p, const si_state& tau, event_idx e);

// Sorted observable events that are releasable heads of tau.
std::vector<event_idx> releasable_heads(const plant& p, const si_state& tau);

// All total orders over the union alphabet consistent with every component,
// obtained by exhausting release paths. Exponential; test/oracle use only.
std::set<std::vector<event_idx>> enumerate_to_sequences(const plant& p, const si_state& tau,
                                                        int component_cap = default_component_cap);

} // namespace detsynth
