#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "detsynth/errors.hpp"

namespace detsynth {

using state_idx = int;
using event_idx = int;

// Sorted, duplicate-free set of state indices.
using state_set = std::vector<state_idx>;

state_set normalize(state_set s);
bool contains(const state_set& s, state_idx q);
state_set set_union(const state_set& a, const state_set& b);

struct plant_event_decl {
    std::string name;
    std::vector<int> observers; // 1-based site indices; empty = unobservable
};

struct plant_transition {
    std::string src;
    std::string event;
    std::string dst;
};

// Nondeterministic finite automaton observed by a fixed number of sites.
// States and events are identified by opaque strings; internally everything
// runs on dense indices assigned in lexicographic name order, so iteration
// order (and thus any serialized output) is reproducible.
class plant {
public:
    static plant make(std::vector<std::string> states,
                      std::vector<std::string> initial,
                      int num_sites,
                      std::vector<plant_event_decl> events,
                      std::vector<plant_transition> transitions);

    int num_states() const { return static_cast<int>(state_names_.size()); }
    int num_events() const { return static_cast<int>(event_names_.size()); }
    int num_sites() const { return num_sites_; }

    const std::string& state_name(state_idx q) const { return state_names_[q]; }
    const std::string& event_name(event_idx e) const { return event_names_[e]; }
    std::optional<state_idx> find_state(const std::string& name) const;
    std::optional<event_idx> find_event(const std::string& name) const;
    state_idx require_state(const std::string& name) const;
    event_idx require_event(const std::string& name) const;

    // Sorted 1-based site indices observing e; empty for unobservable events.
    const std::vector<int>& observers(event_idx e) const { return observers_[e]; }
    bool observable(event_idx e) const { return !observers_[e].empty(); }
    bool observed_by(event_idx e, int site) const;

    // Sorted event indices of the jointly observable alphabet.
    const std::vector<event_idx>& observable_events() const { return observable_events_; }
    // Events observed by a given 1-based site, sorted.
    const std::vector<event_idx>& site_alphabet(int site) const;

    const state_set& initial() const { return initial_; }

    // delta(q, e), sorted.
    const state_set& targets(state_idx q, event_idx e) const;
    // Outgoing transitions of q sorted by (event, dst).
    const std::vector<std::pair<event_idx, state_idx>>& out(state_idx q) const { return out_[q]; }
    // All transitions sorted by (src, event, dst).
    std::vector<std::tuple<state_idx, event_idx, state_idx>> transitions() const;

    // Natural projection onto a 1-based site: keeps exactly the events that
    // site observes. Homomorphic over concatenation.
    std::vector<event_idx> project(std::span<const event_idx> seq, int site) const;
    std::vector<std::string> project(const std::vector<std::string>& seq, int site) const;
    // Projection onto the union alphabet: drops unobservable events.
    std::vector<event_idx> project_observable(std::span<const event_idx> seq) const;

    // Least fixpoint closure of q under transitions labeled by unobservable
    // events. Monotone, extensive, idempotent.
    state_set unobservable_reach(const state_set& q) const;
    // One-step successors of q under an observable event.
    state_set observable_reach(const state_set& q, event_idx e) const;
    // observable_reach for events; the eps case is defined as the
    // unobservable reach.
    state_set reach(const state_set& q, std::optional<event_idx> e) const {
        return e ? observable_reach(q, *e) : unobservable_reach(q);
    }

private:
    int num_sites_ = 1;
    std::vector<std::string> state_names_;
    std::vector<std::string> event_names_;
    std::map<std::string, state_idx> state_index_;
    std::map<std::string, event_idx> event_index_;
    std::vector<std::vector<int>> observers_;
    std::vector<event_idx> observable_events_;
    std::vector<std::vector<event_idx>> site_alphabets_; // per 0-based site
    state_set initial_;
    std::vector<std::vector<state_set>> targets_; // [state][event]
    std::vector<std::vector<std::pair<event_idx, state_idx>>> out_;
    state_set empty_set_;
};

} // namespace detsynth
