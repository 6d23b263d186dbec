#include "detsynth/plant.hpp"

#include <algorithm>
#include <deque>

namespace detsynth {

state_set normalize(state_set s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

bool contains(const state_set& s, state_idx q) {
    return std::binary_search(s.begin(), s.end(), q);
}

state_set set_union(const state_set& a, const state_set& b) {
    state_set r;
    r.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

plant plant::make(std::vector<std::string> states,
                  std::vector<std::string> initial,
                  int num_sites,
                  std::vector<plant_event_decl> events,
                  std::vector<plant_transition> transitions) {
    plant p;
    if (num_sites < 1)
        throw validation_error("num_sites must be >= 1, got " + std::to_string(num_sites));
    p.num_sites_ = num_sites;

    std::sort(states.begin(), states.end());
    for (size_t i = 0; i + 1 < states.size(); ++i)
        if (states[i] == states[i + 1])
            throw validation_error("duplicate state id '" + states[i] + "'");
    if (states.empty())
        throw validation_error("plant must declare at least one state");
    p.state_names_ = std::move(states);
    for (int i = 0; i < p.num_states(); ++i)
        p.state_index_[p.state_names_[i]] = i;

    std::sort(events.begin(), events.end(),
              [](const plant_event_decl& a, const plant_event_decl& b) { return a.name < b.name; });
    for (size_t i = 0; i + 1 < events.size(); ++i)
        if (events[i].name == events[i + 1].name)
            throw validation_error("duplicate event id '" + events[i].name + "'");
    for (auto& e : events) {
        std::sort(e.observers.begin(), e.observers.end());
        e.observers.erase(std::unique(e.observers.begin(), e.observers.end()), e.observers.end());
        for (int site : e.observers)
            if (site < 1 || site > num_sites)
                throw validation_error("event '" + e.name + "' has observer site " +
                                       std::to_string(site) + " outside 1.." +
                                       std::to_string(num_sites));
    }
    p.site_alphabets_.assign(num_sites, {});
    for (size_t i = 0; i < events.size(); ++i) {
        p.event_names_.push_back(events[i].name);
        p.event_index_[events[i].name] = static_cast<event_idx>(i);
        p.observers_.push_back(events[i].observers);
        if (!events[i].observers.empty())
            p.observable_events_.push_back(static_cast<event_idx>(i));
        for (int site : events[i].observers)
            p.site_alphabets_[site - 1].push_back(static_cast<event_idx>(i));
    }

    if (initial.empty())
        throw validation_error("initial state set must be nonempty");
    for (const auto& name : initial) {
        auto q = p.find_state(name);
        if (!q)
            throw validation_error("initial state '" + name + "' is not a declared state");
        p.initial_.push_back(*q);
    }
    p.initial_ = normalize(std::move(p.initial_));

    p.targets_.assign(p.num_states(), std::vector<state_set>(p.num_events()));
    for (const auto& t : transitions) {
        auto src = p.find_state(t.src);
        auto dst = p.find_state(t.dst);
        auto e = p.find_event(t.event);
        if (!src)
            throw validation_error("transition source '" + t.src + "' is not a declared state");
        if (!dst)
            throw validation_error("transition target '" + t.dst + "' is not a declared state");
        if (!e)
            throw validation_error("transition event '" + t.event + "' is not a declared event");
        p.targets_[*src][*e].push_back(*dst);
    }
    p.out_.assign(p.num_states(), {});
    for (int q = 0; q < p.num_states(); ++q)
        for (int e = 0; e < p.num_events(); ++e) {
            p.targets_[q][e] = normalize(std::move(p.targets_[q][e]));
            for (state_idx dst : p.targets_[q][e])
                p.out_[q].emplace_back(e, dst);
        }
    return p;
}

std::optional<state_idx> plant::find_state(const std::string& name) const {
    auto it = state_index_.find(name);
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<event_idx> plant::find_event(const std::string& name) const {
    auto it = event_index_.find(name);
    if (it == event_index_.end()) return std::nullopt;
    return it->second;
}

state_idx plant::require_state(const std::string& name) const {
    auto q = find_state(name);
    if (!q) throw validation_error("unknown state id '" + name + "'");
    return *q;
}

event_idx plant::require_event(const std::string& name) const {
    auto e = find_event(name);
    if (!e) throw validation_error("unknown event id '" + name + "'");
    return *e;
}

bool plant::observed_by(event_idx e, int site) const {
    const auto& obs = observers_[e];
    return std::binary_search(obs.begin(), obs.end(), site);
}

const std::vector<event_idx>& plant::site_alphabet(int site) const {
    if (site < 1 || site > num_sites_)
        throw validation_error("site index " + std::to_string(site) + " outside 1.." +
                               std::to_string(num_sites_));
    return site_alphabets_[site - 1];
}

const state_set& plant::targets(state_idx q, event_idx e) const {
    return targets_[q][e];
}

std::vector<std::tuple<state_idx, event_idx, state_idx>> plant::transitions() const {
    std::vector<std::tuple<state_idx, event_idx, state_idx>> r;
    for (int q = 0; q < num_states(); ++q)
        for (int e = 0; e < num_events(); ++e)
            for (state_idx dst : targets_[q][e])
                r.emplace_back(q, e, dst);
    return r;
}

std::vector<event_idx> plant::project(std::span<const event_idx> seq, int site) const {
    if (site < 1 || site > num_sites_)
        throw validation_error("projection site " + std::to_string(site) + " outside 1.." +
                               std::to_string(num_sites_));
    std::vector<event_idx> r;
    for (event_idx e : seq)
        if (observed_by(e, site)) r.push_back(e);
    return r;
}

std::vector<std::string> plant::project(const std::vector<std::string>& seq, int site) const {
    std::vector<event_idx> idx;
    idx.reserve(seq.size());
    for (const auto& name : seq) idx.push_back(require_event(name));
    std::vector<std::string> r;
    for (event_idx e : project(idx, site)) r.push_back(event_name(e));
    return r;
}

std::vector<event_idx> plant::project_observable(std::span<const event_idx> seq) const {
    std::vector<event_idx> r;
    for (event_idx e : seq)
        if (observable(e)) r.push_back(e);
    return r;
}

state_set plant::unobservable_reach(const state_set& q) const {
    std::vector<char> seen(num_states(), 0);
    std::deque<state_idx> work(q.begin(), q.end());
    for (state_idx s : q) seen[s] = 1;
    while (!work.empty()) {
        state_idx s = work.front();
        work.pop_front();
        for (const auto& [e, dst] : out_[s]) {
            if (observable(e) || seen[dst]) continue;
            seen[dst] = 1;
            work.push_back(dst);
        }
    }
    state_set r;
    for (int s = 0; s < num_states(); ++s)
        if (seen[s]) r.push_back(s);
    return r;
}

state_set plant::observable_reach(const state_set& q, event_idx e) const {
    if (!observable(e))
        throw validation_error("observable_reach on unobservable event '" + event_name(e) + "'");
    state_set r;
    for (state_idx s : q)
        for (state_idx dst : targets_[s][e]) r.push_back(dst);
    return normalize(std::move(r));
}

} // namespace detsynth
