#include "detsynth/global.hpp"

#include <algorithm>
#include <memory>

namespace detsynth {

estimate_set least_cost_filter(const estimate_set& est) {
    estimate_set sorted = normalize_estimates(est);
    estimate_set r;
    for (const auto& [q, c] : sorted) {
        if (!r.empty() && r.back().first == q) continue; // sorted: first pair is minimal
        r.emplace_back(q, c);
    }
    return r;
}

state_set modified_plant::encode_initial(const state_set& q0) const {
    state_set r;
    for (state_idx q : q0) r.push_back(encode(q, 0));
    return normalize(std::move(r));
}

estimate_set modified_plant::decode_set(const state_set& s) const {
    estimate_set r;
    for (state_idx q : s) r.push_back(decode(q));
    return normalize_estimates(std::move(r));
}

modified_plant build_gg(const plant& p, const erm& table) {
    table.ensure_valid();
    erm_binding bind = bind_global(table, p);
    const int cu = table.cost_bound();

    modified_plant m;
    m.cost_bound = cu;

    std::vector<std::string> states;
    auto name_of = [&](state_idx q, int c) { return p.state_name(q) + "@" + std::to_string(c); };
    for (int q = 0; q < p.num_states(); ++q)
        for (int c = 0; c <= cu; ++c) states.push_back(name_of(q, c));

    std::vector<plant_event_decl> events;
    for (int e = 0; e < p.num_events(); ++e)
        events.push_back({p.event_name(e), p.observers(e)});
    events.push_back({"eps", {}});

    std::vector<plant_transition> trans;
    std::set<std::tuple<std::string, std::string, std::string>> error_names;
    auto add = [&](state_idx q, int c, const std::string& ev, state_idx q2, int c2, bool err) {
        trans.push_back({name_of(q, c), ev, name_of(q2, c2)});
        if (err) error_names.insert({name_of(q, c), ev, name_of(q2, c2)});
    };

    for (const auto& [q, e, dst] : p.transitions()) {
        if (!p.observable(e)) {
            for (int c = 0; c <= cu; ++c) add(q, c, p.event_name(e), dst, c, false);
            continue;
        }
        // received symbol ranges over the observable alphabet plus eps
        for (event_idx recv : p.observable_events()) {
            auto k = bind.cost_ev(e, recv);
            if (!k) continue;
            for (int c = 0; c + *k <= cu; ++c)
                add(q, c, p.event_name(recv), dst, c + *k, recv != e);
        }
        if (auto k = bind.cost_ev(e, -1)) {
            for (int c = 0; c + *k <= cu; ++c) add(q, c, "eps", dst, c + *k, true);
        }
    }
    for (event_idx recv : p.observable_events()) {
        auto k = bind.cost_ev(-1, recv);
        if (!k) continue;
        for (int q = 0; q < p.num_states(); ++q)
            for (int c = 0; c + *k <= cu; ++c) add(q, c, p.event_name(recv), q, c + *k, true);
    }

    std::vector<std::string> initial;
    for (int q = 0; q < p.num_states(); ++q) initial.push_back(name_of(q, 0));

    m.product = plant::make(std::move(states), std::move(initial), p.num_sites(),
                            std::move(events), std::move(trans));

    m.encode_table.assign(p.num_states(), std::vector<state_idx>(cu + 1));
    m.decode_table.assign(m.product.num_states(), {0, 0});
    for (int q = 0; q < p.num_states(); ++q)
        for (int c = 0; c <= cu; ++c) {
            state_idx s = m.product.require_state(name_of(q, c));
            m.encode_table[q][c] = s;
            m.decode_table[s] = {q, c};
        }
    m.event_map.assign(p.num_events(), -1);
    for (int e = 0; e < p.num_events(); ++e)
        m.event_map[e] = m.product.require_event(p.event_name(e));
    m.deletion_event = m.product.require_event("eps");
    for (const auto& [src, ev, dst] : error_names)
        m.error_edges.insert({m.product.require_state(src), m.product.require_event(ev),
                              m.product.require_state(dst)});
    return m;
}

std::optional<costed_si> egts_release(const plant& p, const erm& table, const costed_si& node,
                                      int original, int received) {
    if (original == label_eps && received == label_eps)
        throw validation_error("release pair (eps, eps) is not a transition symbol");
    if (original != label_eps && !p.observable(original))
        throw validation_error("release pair with unobservable original '" +
                               p.event_name(original) + "'");
    erm_binding bind = bind_global(table, p);
    auto k = bind.cost_ev(original, received);
    if (!k || node.cost + *k > table.cost_bound()) return std::nullopt;
    if (received == label_eps) return costed_si{node.tau, node.cost + *k};
    auto next = sbuilder_release(p, node.tau, received);
    if (!next) return std::nullopt;
    return costed_si{*next, node.cost + *k};
}

synchronizer build_eg_synchronizer(const plant& p, const erm& table, const si_state& tau,
                                   const state_set& q0) {
    auto mg = std::make_shared<modified_plant>(build_gg(p, table));
    release_fn releases = [&p, mg](const sync_node& node, const state_set* est) {
        std::vector<release_candidate> cands;
        for (event_idx e : releasable_heads(p, node.tau)) {
            if (est && mg->product.observable_reach(*est, mg->event_map[e]).empty()) continue;
            cands.push_back({sync_label{label_none, {e}}, *sbuilder_release(p, node.tau, e), 0,
                             false});
        }
        return cands;
    };
    update_fn update = [mg](const state_set& est, const sync_label& label) {
        return mg->product.unobservable_reach(
            mg->product.observable_reach(est, mg->event_map[label.received[0]]));
    };
    state_set root = mg->product.unobservable_reach(mg->encode_initial(q0));
    auto s = build_by_release(sync_kind::eg, p.num_sites(), tau, root, releases, update);
    s.decoded.resize(s.nodes.size());
    for (size_t i = 0; i < s.nodes.size(); ++i) s.decoded[i] = mg->decode_set(s.estimates[i]);
    return s;
}

estimate_set estimate_global_system(const plant& p, const erm& table, const si_state& tau,
                                    const state_set& q0) {
    synchronizer s = build_eg_synchronizer(p, table, tau, q0);
    for (int id : s.ending) return s.decoded[id];
    return {};
}

namespace {

std::vector<release_candidate> egt_candidates(const plant& p, const erm_binding& bind, int cu,
                                              const sync_node& node, const state_set* est) {
    std::vector<release_candidate> cands;
    auto original_enabled = [&](int orig) {
        if (!est) return true;
        if (orig == label_eps) return !est->empty();
        return !p.observable_reach(*est, orig).empty();
    };
    // received event released from tau; the original ranges over eps (an
    // insertion hypothesis) and the observable alphabet
    for (event_idx recv : releasable_heads(p, node.tau)) {
        si_state next = *sbuilder_release(p, node.tau, recv);
        for (int orig = label_eps; orig < p.num_events(); ++orig) {
            if (orig != label_eps && !p.observable(orig)) continue;
            auto k = bind.cost_ev(orig, recv);
            if (!k || node.cost + *k > cu) continue;
            if (!original_enabled(orig)) continue;
            cands.push_back({sync_label{orig, {recv}}, next, *k, orig != recv});
        }
    }
    // deletion hypotheses: the original is dropped, nothing is released
    for (event_idx orig : p.observable_events()) {
        auto k = bind.cost_ev(orig, label_eps);
        if (!k || node.cost + *k > cu) continue;
        if (!original_enabled(orig)) continue;
        cands.push_back({sync_label{orig, {label_eps}}, node.tau, *k, true});
    }
    std::sort(cands.begin(), cands.end(),
              [](const release_candidate& a, const release_candidate& b) {
                  return a.label < b.label;
              });
    return cands;
}

update_fn plant_update(const plant& p) {
    return [&p](const state_set& est, const sync_label& label) {
        if (label.original == label_eps) return p.unobservable_reach(est);
        return p.unobservable_reach(p.observable_reach(est, label.original));
    };
}

} // namespace

synchronizer build_egt_synchronizer(const plant& p, const erm& table, const si_state& tau,
                                    const state_set& q0) {
    table.ensure_valid();
    erm_binding bind = bind_global(table, p);
    const int cu = table.cost_bound();
    release_fn releases = [&p, bind, cu](const sync_node& node, const state_set* est) {
        return egt_candidates(p, bind, cu, node, est);
    };
    synchronizer s = build_by_release(sync_kind::egt, p.num_sites(), tau,
                                      p.unobservable_reach(q0), releases, plant_update(p));
    s.decoded.resize(s.nodes.size());
    for (size_t i = 0; i < s.nodes.size(); ++i)
        for (state_idx q : s.estimates[i]) s.decoded[i].emplace_back(q, s.nodes[i].cost);
    return s;
}

estimate_set estimate_global_builder(const plant& p, const erm& table, const si_state& tau,
                                     const state_set& q0) {
    synchronizer s = build_egt_synchronizer(p, table, tau, q0);
    estimate_set r;
    for (int id : s.ending) r.insert(r.end(), s.decoded[id].begin(), s.decoded[id].end());
    return normalize_estimates(std::move(r));
}

synchronizer build_egts_raw(const plant& p, const erm& table, const si_state& tau) {
    table.ensure_valid();
    erm_binding bind = bind_global(table, p);
    const int cu = table.cost_bound();
    release_fn releases = [&p, bind, cu](const sync_node& node, const state_set* est) {
        return egt_candidates(p, bind, cu, node, est);
    };
    return build_by_release(sync_kind::egt, p.num_sites(), tau, std::nullopt, releases,
                            update_fn{});
}

extraction extract_geto(const synchronizer& s, size_t path_limit) {
    if (s.kind != sync_kind::egt)
        throw validation_error("extract_geto expects an egt structure");
    return extract_marked(s, path_limit);
}

} // namespace detsynth
