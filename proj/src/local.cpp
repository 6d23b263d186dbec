#include "detsynth/local.hpp"

#include <algorithm>
#include <functional>
#include <memory>

namespace detsynth {

namespace {

std::string tuple_name(const plant& p, std::span<const int> tuple) {
    std::string name;
    for (size_t i = 0; i < tuple.size(); ++i) {
        if (i) name += "|";
        name += tuple[i] == label_eps ? "eps" : p.event_name(tuple[i]);
    }
    return name;
}

std::vector<int> tuple_observers(std::span<const int> tuple) {
    std::vector<int> obs;
    for (size_t i = 0; i < tuple.size(); ++i)
        if (tuple[i] != label_eps) obs.push_back(static_cast<int>(i) + 1);
    return obs;
}

} // namespace

observation_automaton build_go(const plant& p) {
    const int m = p.num_sites();
    std::map<std::vector<int>, std::string> tuples;
    std::vector<std::vector<int>> per_event(p.num_events());
    for (int e = 0; e < p.num_events(); ++e) {
        std::vector<int> t(m, label_eps);
        for (int site : p.observers(e)) t[site - 1] = e;
        per_event[e] = t;
        tuples.emplace(t, tuple_name(p, t));
    }

    std::vector<plant_event_decl> events;
    for (const auto& [t, name] : tuples) events.push_back({name, tuple_observers(t)});

    std::vector<std::string> states;
    for (int q = 0; q < p.num_states(); ++q) states.push_back(p.state_name(q));
    std::vector<std::string> initial;
    for (state_idx q : p.initial()) initial.push_back(p.state_name(q));

    std::vector<plant_transition> trans;
    for (const auto& [q, e, dst] : p.transitions())
        trans.push_back({p.state_name(q), tuples.at(per_event[e]), p.state_name(dst)});

    observation_automaton obs;
    obs.go = plant::make(std::move(states), std::move(initial), m, std::move(events),
                         std::move(trans));
    obs.components.assign(obs.go.num_events(), {});
    for (const auto& [t, name] : tuples) obs.components[obs.go.require_event(name)] = t;
    obs.event_map.assign(p.num_events(), -1);
    for (int e = 0; e < p.num_events(); ++e)
        obs.event_map[e] = obs.go.require_event(tuples.at(per_event[e]));
    std::vector<int> silent(m, label_eps);
    if (auto it = tuples.find(silent); it != tuples.end())
        obs.silent_event = obs.go.require_event(it->second);
    return obs;
}

namespace {

// All per-site deletion/replacement rewrites of an observed tuple, with the
// summed cost of the chosen error actions. Includes the identity rewrite.
void enumerate_rewrites(const plant& p, const std::vector<erm_binding>& binds,
                        const std::vector<int>& tuple, size_t site, std::vector<int>& cur,
                        int cost, const std::function<void(const std::vector<int>&, int)>& emit) {
    if (site == tuple.size()) {
        emit(cur, cost);
        return;
    }
    if (tuple[site] == label_eps) {
        cur[site] = label_eps;
        enumerate_rewrites(p, binds, tuple, site + 1, cur, cost, emit);
        return;
    }
    const auto& bind = binds[site];
    for (event_idx recv : p.site_alphabet(static_cast<int>(site) + 1)) {
        auto k = bind.cost_ev(tuple[site], recv);
        if (!k) continue;
        cur[site] = recv;
        enumerate_rewrites(p, binds, tuple, site + 1, cur, cost + *k, emit);
    }
    if (auto k = bind.cost_ev(tuple[site], label_eps)) {
        cur[site] = label_eps;
        enumerate_rewrites(p, binds, tuple, site + 1, cur, cost + *k, emit);
    }
}

} // namespace

state_set local_modified::encode_initial(const state_set& q0) const {
    state_set r;
    for (state_idx q : q0) r.push_back(encode(q, 0));
    return normalize(std::move(r));
}

estimate_set local_modified::decode_set(const state_set& s) const {
    estimate_set r;
    for (state_idx q : s) r.push_back(decode(q));
    return normalize_estimates(std::move(r));
}

local_modified build_gl(const plant& p, const observation_automaton& obs,
                        const local_erm_set& tables) {
    tables.ensure_valid();
    auto binds = bind_local(tables, p);
    const int cu = tables.cost_bound;
    const int m = p.num_sites();

    std::map<std::vector<int>, std::string> tuples;
    auto declare = [&](const std::vector<int>& t) {
        tuples.emplace(t, tuple_name(p, t));
    };
    std::vector<int> silent(m, label_eps);
    declare(silent);
    for (const auto& t : obs.components) declare(t);

    struct raw_edge {
        state_idx q;
        int c;
        std::vector<int> tuple;
        state_idx dst;
        int c2;
        bool error;
    };
    std::vector<raw_edge> raw;

    for (const auto& [q, e_go, dst] : obs.go.transitions()) {
        const auto& t = obs.components[e_go];
        state_idx src_state = q;
        state_idx dst_state = dst;
        std::vector<int> cur(m, label_eps);
        enumerate_rewrites(p, binds, t, 0, cur, 0,
                           [&](const std::vector<int>& recv, int k) {
                               declare(recv);
                               for (int c = 0; c + k <= cu; ++c)
                                   raw.push_back({src_state, c, recv, dst_state, c + k,
                                                  recv != t});
                           });
    }
    for (int site = 1; site <= m; ++site) {
        for (event_idx x : p.site_alphabet(site)) {
            auto k = binds[site - 1].cost_ev(label_eps, x);
            if (!k) continue;
            std::vector<int> t(m, label_eps);
            t[site - 1] = x;
            declare(t);
            for (int q = 0; q < p.num_states(); ++q)
                for (int c = 0; c + *k <= cu; ++c) raw.push_back({q, c, t, q, c + *k, true});
        }
    }

    auto name_of = [&](state_idx q, int c) { return p.state_name(q) + "@" + std::to_string(c); };
    std::vector<std::string> states;
    for (int q = 0; q < p.num_states(); ++q)
        for (int c = 0; c <= cu; ++c) states.push_back(name_of(q, c));
    std::vector<std::string> initial;
    for (int q = 0; q < p.num_states(); ++q) initial.push_back(name_of(q, 0));
    std::vector<plant_event_decl> events;
    for (const auto& [t, name] : tuples) events.push_back({name, tuple_observers(t)});

    std::vector<plant_transition> trans;
    std::set<std::tuple<std::string, std::string, std::string>> error_names;
    for (const auto& r : raw) {
        trans.push_back({name_of(r.q, r.c), tuples.at(r.tuple), name_of(r.dst, r.c2)});
        if (r.error)
            error_names.insert({name_of(r.q, r.c), tuples.at(r.tuple), name_of(r.dst, r.c2)});
    }

    local_modified ml;
    ml.cost_bound = cu;
    ml.product = plant::make(std::move(states), std::move(initial), m, std::move(events),
                             std::move(trans));
    ml.encode_table.assign(p.num_states(), std::vector<state_idx>(cu + 1));
    ml.decode_table.assign(ml.product.num_states(), {0, 0});
    for (int q = 0; q < p.num_states(); ++q)
        for (int c = 0; c <= cu; ++c) {
            state_idx s = ml.product.require_state(name_of(q, c));
            ml.encode_table[q][c] = s;
            ml.decode_table[s] = {q, c};
        }
    ml.components.assign(ml.product.num_events(), {});
    for (const auto& [t, name] : tuples) {
        event_idx e = ml.product.require_event(name);
        ml.components[e] = t;
        ml.tuple_index[t] = e;
    }
    ml.silent_event = ml.tuple_index.at(silent);
    for (const auto& [src, ev, dst] : error_names)
        ml.error_edges.insert({ml.product.require_state(src), ml.product.require_event(ev),
                               ml.product.require_state(dst)});
    return ml;
}

std::optional<si_state> ms_release(const si_state& tau, std::span<const int> tuple) {
    bool all_silent = true;
    for (int x : tuple)
        if (x != label_eps) all_silent = false;
    if (all_silent)
        throw validation_error("the all-eps tuple is not a release symbol");
    if (tuple.size() != tau.seqs.size())
        throw validation_error("tuple arity does not match the number of sites");
    si_state next = tau;
    for (size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] == label_eps) continue;
        auto& comp = next.seqs[i];
        if (comp.empty() || comp.front() != tuple[i]) return std::nullopt;
        comp.erase(comp.begin());
    }
    return next;
}

int counting(const si_state& tau) {
    return tau.total_length();
}

std::vector<std::pair<int, int>> release_list::all() const {
    std::vector<std::pair<int, int>> r;
    r.insert(r.end(), deletions.begin(), deletions.end());
    r.insert(r.end(), replacements.begin(), replacements.end());
    r.insert(r.end(), insertions.begin(), insertions.end());
    r.insert(r.end(), errorless.begin(), errorless.end());
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

release_list make_release_list(const plant& p, const erm_binding& site_table, int site,
                               std::span<const event_idx> seq) {
    release_list rl;
    for (event_idx e : p.site_alphabet(site))
        if (site_table.cost_ev(e, label_eps)) rl.deletions.emplace_back(e, label_eps);
    if (!seq.empty()) {
        event_idx head = seq.front();
        rl.errorless.emplace_back(head, head);
        for (event_idx e : p.site_alphabet(site)) {
            if (e == head) continue;
            if (site_table.cost_ev(e, head)) rl.replacements.emplace_back(e, head);
        }
        if (site_table.cost_ev(label_eps, head)) rl.insertions.emplace_back(label_eps, head);
    }
    return rl;
}

namespace {

struct elt_context {
    const plant& p;
    std::vector<erm_binding> binds;
    int cu;
};

std::vector<release_candidate> elt_candidates(const elt_context& ctx, const sync_node& node,
                                              const state_set* est) {
    const plant& p = ctx.p;
    const int m = p.num_sites();
    std::vector<release_candidate> cands;

    // single-site insertion hypotheses: the head was never produced by the
    // plant, so only that one component shrinks
    for (int site = 1; site <= m; ++site) {
        const auto& comp = node.tau.seqs[site - 1];
        if (comp.empty()) continue;
        event_idx head = comp.front();
        auto k = ctx.binds[site - 1].cost_ev(label_eps, head);
        if (!k || node.cost + *k > ctx.cu) continue;
        std::vector<int> recv(m, label_eps);
        recv[site - 1] = head;
        si_state next = node.tau;
        next.seqs[site - 1].erase(next.seqs[site - 1].begin());
        cands.push_back({sync_label{label_eps, recv}, next, *k, true});
    }

    // plant-event hypotheses: every observing site explains the original via
    // its release list (match or replace its head, or delete the original)
    for (event_idx orig : p.observable_events()) {
        if (est && p.observable_reach(*est, orig).empty()) continue;
        std::vector<std::vector<std::pair<int, int>>> options; // (received, cost) per site
        bool feasible = true;
        for (int site : p.observers(orig)) {
            std::vector<std::pair<int, int>> opts;
            const auto& comp = node.tau.seqs[site - 1];
            if (!comp.empty()) {
                if (auto k = ctx.binds[site - 1].cost_ev(orig, comp.front()))
                    opts.emplace_back(comp.front(), *k);
            }
            if (auto k = ctx.binds[site - 1].cost_ev(orig, label_eps))
                opts.emplace_back(label_eps, *k);
            if (opts.empty()) {
                feasible = false;
                break;
            }
            options.push_back(std::move(opts));
        }
        if (!feasible) continue;
        const auto& sites = p.observers(orig);
        std::vector<size_t> choice(sites.size(), 0);
        for (;;) {
            int cost = 0;
            std::vector<int> recv(m, label_eps);
            si_state next = node.tau;
            bool error = false;
            for (size_t i = 0; i < sites.size(); ++i) {
                const auto& [r, k] = options[i][choice[i]];
                cost += k;
                recv[sites[i] - 1] = r;
                if (r != label_eps)
                    next.seqs[sites[i] - 1].erase(next.seqs[sites[i] - 1].begin());
                if (r != orig) error = true;
            }
            if (node.cost + cost <= ctx.cu)
                cands.push_back({sync_label{orig, recv}, next, cost, error});
            size_t i = 0;
            while (i < sites.size() && ++choice[i] == options[i].size()) choice[i++] = 0;
            if (i == sites.size()) break;
        }
    }
    std::sort(cands.begin(), cands.end(),
              [](const release_candidate& a, const release_candidate& b) {
                  return a.label < b.label;
              });
    return cands;
}

} // namespace

std::optional<costed_si> elts_release(const plant& p, const local_erm_set& tables,
                                      const costed_si& node, int original,
                                      std::span<const int> received) {
    tables.ensure_valid();
    bool all_silent = true;
    for (int x : received)
        if (x != label_eps) all_silent = false;
    if (original == label_eps && all_silent)
        throw validation_error("the all-eps tuple is not a release symbol");
    if (original != label_eps && !p.observable(original))
        throw validation_error("release tuple with unobservable original '" +
                               p.event_name(original) + "'");
    auto binds = bind_local(tables, p);
    const int cu = tables.cost_bound;

    si_state next = node.tau;
    int cost = node.cost;
    if (original == label_eps) {
        int site = -1;
        for (size_t i = 0; i < received.size(); ++i) {
            if (received[i] == label_eps) continue;
            if (site >= 0) return std::nullopt; // insertions go one site at a time
            site = static_cast<int>(i);
        }
        auto& comp = next.seqs[site];
        if (comp.empty() || comp.front() != received[site]) return std::nullopt;
        auto k = binds[site].cost_ev(label_eps, received[site]);
        if (!k) return std::nullopt;
        comp.erase(comp.begin());
        cost += *k;
    } else {
        for (size_t i = 0; i < received.size(); ++i) {
            int site = static_cast<int>(i) + 1;
            bool observing = p.observed_by(original, site);
            if (!observing) {
                if (received[i] != label_eps) return std::nullopt;
                continue;
            }
            auto k = binds[i].cost_ev(original, received[i]);
            if (!k) return std::nullopt;
            cost += *k;
            if (received[i] != label_eps) {
                auto& comp = next.seqs[i];
                if (comp.empty() || comp.front() != received[i]) return std::nullopt;
                comp.erase(comp.begin());
            }
        }
    }
    if (cost > cu) return std::nullopt;
    return costed_si{next, cost};
}

synchronizer build_el_synchronizer(const plant& p, const local_erm_set& tables,
                                   const si_state& tau, const state_set& q0) {
    auto obs = build_go(p);
    auto ml = std::make_shared<local_modified>(build_gl(p, obs, tables));
    release_fn releases = [ml](const sync_node& node, const state_set* est) {
        std::vector<release_candidate> cands;
        if (!est) throw invariant_error("el synchronizer requires estimates");
        std::set<std::vector<int>> labels;
        for (state_idx ps : *est)
            for (const auto& [e, dst] : ml->product.out(ps)) {
                if (e == ml->silent_event) continue;
                labels.insert(ml->components[e]);
            }
        for (const auto& t : labels) {
            si_state next = node.tau;
            bool ok = true;
            for (size_t i = 0; i < t.size() && ok; ++i) {
                if (t[i] == label_eps) continue;
                auto& comp = next.seqs[i];
                if (comp.empty() || comp.front() != t[i])
                    ok = false;
                else
                    comp.erase(comp.begin());
            }
            if (ok) cands.push_back({sync_label{label_none, t}, next, 0, false});
        }
        return cands;
    };
    update_fn update = [ml](const state_set& est, const sync_label& label) {
        return ml->product.unobservable_reach(
            ml->product.observable_reach(est, ml->tuple_index.at(label.received)));
    };
    state_set root = ml->product.unobservable_reach(ml->encode_initial(q0));
    synchronizer s =
        build_by_release(sync_kind::el, p.num_sites(), tau, root, releases, update);
    s.decoded.resize(s.nodes.size());
    for (size_t i = 0; i < s.nodes.size(); ++i) s.decoded[i] = ml->decode_set(s.estimates[i]);
    return s;
}

estimate_set estimate_local_system(const plant& p, const local_erm_set& tables,
                                   const si_state& tau, const state_set& q0) {
    synchronizer s = build_el_synchronizer(p, tables, tau, q0);
    for (int id : s.ending) return s.decoded[id];
    return {};
}

namespace {

update_fn elt_update(const plant& p) {
    return [&p](const state_set& est, const sync_label& label) {
        if (label.original == label_eps) return p.unobservable_reach(est);
        return p.unobservable_reach(p.observable_reach(est, label.original));
    };
}

} // namespace

synchronizer build_elt_synchronizer(const plant& p, const local_erm_set& tables,
                                    const si_state& tau, const state_set& q0) {
    tables.ensure_valid();
    auto ctx = std::make_shared<elt_context>(
        elt_context{p, bind_local(tables, p), tables.cost_bound});
    release_fn releases = [ctx](const sync_node& node, const state_set* est) {
        return elt_candidates(*ctx, node, est);
    };
    synchronizer s = build_by_release(sync_kind::elt, p.num_sites(), tau,
                                      p.unobservable_reach(q0), releases, elt_update(p));
    s.decoded.resize(s.nodes.size());
    for (size_t i = 0; i < s.nodes.size(); ++i)
        for (state_idx q : s.estimates[i]) s.decoded[i].emplace_back(q, s.nodes[i].cost);
    return s;
}

estimate_set estimate_local_builder(const plant& p, const local_erm_set& tables,
                                    const si_state& tau, const state_set& q0) {
    synchronizer s = build_elt_synchronizer(p, tables, tau, q0);
    estimate_set r;
    for (int id : s.ending) r.insert(r.end(), s.decoded[id].begin(), s.decoded[id].end());
    return normalize_estimates(std::move(r));
}

synchronizer build_elts_raw(const plant& p, const local_erm_set& tables, const si_state& tau) {
    tables.ensure_valid();
    auto ctx = std::make_shared<elt_context>(
        elt_context{p, bind_local(tables, p), tables.cost_bound});
    release_fn releases = [ctx](const sync_node& node, const state_set* est) {
        return elt_candidates(*ctx, node, est);
    };
    return build_by_release(sync_kind::elt, p.num_sites(), tau, std::nullopt, releases,
                            update_fn{});
}

extraction extract_leto(const synchronizer& s, size_t path_limit) {
    if (s.kind != sync_kind::elt)
        throw validation_error("extract_leto expects an elt structure");
    return extract_marked(s, path_limit);
}

} // namespace detsynth
