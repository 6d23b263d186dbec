#include "detsynth/synchronizer.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace detsynth {

std::string to_string(sync_kind k) {
    switch (k) {
        case sync_kind::plain: return "plain";
        case sync_kind::eg: return "eg";
        case sync_kind::el: return "el";
        case sync_kind::egt: return "egt";
        case sync_kind::elt: return "elt";
    }
    return "?";
}

estimate_set normalize_estimates(estimate_set est) {
    std::sort(est.begin(), est.end());
    est.erase(std::unique(est.begin(), est.end()), est.end());
    return est;
}

namespace {

struct builder_state {
    synchronizer s;
    std::map<std::pair<si_state, int>, int> index;
    // level (total remaining length) -> tau -> cost -> node id
    std::map<int, std::map<si_state, std::map<int, int>>> pending;
    std::vector<char> processed;
    std::vector<char> assigned;

    int get_node(const si_state& tau, int cost) {
        auto key = std::make_pair(tau, cost);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(s.nodes.size());
        s.nodes.push_back({tau, cost, tau.empty()});
        s.in_edges.emplace_back();
        s.estimates.emplace_back();
        processed.push_back(0);
        assigned.push_back(0);
        index.emplace(key, id);
        pending[tau.total_length()][tau][cost] = id;
        return id;
    }
};

} // namespace

synchronizer build_by_release(sync_kind kind, int num_sites, si_state root_tau,
                              std::optional<state_set> root_estimate, const release_fn& releases,
                              const update_fn& update) {
    builder_state b;
    b.s.kind = kind;
    b.s.num_sites = num_sites;
    b.s.has_estimates = root_estimate.has_value();

    b.s.root = b.get_node(root_tau, 0);
    if (root_estimate) {
        b.s.estimates[b.s.root] = *root_estimate;
        b.assigned[b.s.root] = 1;
    }

    while (!b.pending.empty()) {
        auto level_it = std::prev(b.pending.end());
        auto& by_tau = level_it->second;
        std::vector<si_state> taus;
        for (const auto& [tau, _] : by_tau) taus.push_back(tau);
        for (const auto& tau : taus) {
            auto& by_cost = by_tau.at(tau);
            // Cost-raising releases extend by_cost while we drain it; always
            // take the cheapest unprocessed node so incoming edges from
            // cheaper same-tau nodes are complete by the time we estimate.
            for (;;) {
                int node = -1;
                for (const auto& [c, id] : by_cost)
                    if (!b.processed[id]) {
                        node = id;
                        break;
                    }
                if (node < 0) break;
                if (!b.assigned[node] && b.s.has_estimates) {
                    state_set est;
                    for (int eid : b.s.in_edges[node]) {
                        const auto& e = b.s.edges[eid];
                        est = set_union(est, update(b.s.estimates[e.src], e.label));
                    }
                    b.s.estimates[node] = std::move(est);
                    b.assigned[node] = 1;
                }
                b.processed[node] = 1;
                const state_set* est =
                    b.s.has_estimates ? &b.s.estimates[node] : nullptr;
                const sync_node current = b.s.nodes[node];
                for (const auto& cand : releases(current, est)) {
                    int child = b.get_node(cand.next_tau, current.cost + cand.cost_delta);
                    if (b.processed[child])
                        throw invariant_error("release reached an already-estimated node");
                    b.s.edges.push_back({node, child, cand.label, cand.error});
                    b.s.in_edges[child].push_back(static_cast<int>(b.s.edges.size()) - 1);
                }
            }
        }
        b.pending.erase(level_it);
    }

    for (int id = 0; id < static_cast<int>(b.s.nodes.size()); ++id)
        if (b.s.nodes[id].ending) b.s.ending.push_back(id);
    std::sort(b.s.ending.begin(), b.s.ending.end(),
              [&](int x, int y) { return b.s.nodes[x].cost < b.s.nodes[y].cost; });
    return b.s;
}

std::vector<std::string> audit_monotonic(const synchronizer& s) {
    std::vector<std::string> diags;
    for (size_t i = 0; i < s.edges.size(); ++i) {
        const auto& e = s.edges[i];
        const auto& src = s.nodes[e.src];
        const auto& dst = s.nodes[e.dst];
        for (size_t k = 0; k < src.tau.seqs.size(); ++k)
            if (dst.tau.seqs[k].size() > src.tau.seqs[k].size())
                diags.push_back("edge " + std::to_string(i) + ": component " +
                                std::to_string(k + 1) + " grew");
        if (dst.cost < src.cost)
            diags.push_back("edge " + std::to_string(i) + ": cost decreased");
    }
    return diags;
}

state_set ending_estimate(const synchronizer& s) {
    for (int id : s.ending)
        if (s.nodes[id].cost == 0 && s.has_estimates) return s.estimates[id];
    return {};
}

namespace {

void extract_rec(const synchronizer& s, const std::vector<std::vector<int>>& out_edges, int node,
                 sym_seq& prefix, size_t visit_limit, size_t& visits, std::set<costed_seq>& found,
                 bool& complete) {
    if (!complete) return;
    if (++visits > visit_limit) {
        complete = false;
        return;
    }
    if (s.nodes[node].ending) found.insert({prefix, s.nodes[node].cost});
    for (int eid : out_edges[node]) {
        const auto& e = s.edges[eid];
        bool emits = e.label.original != label_eps && e.label.original != label_none;
        if (emits) prefix.push_back(e.label.original);
        extract_rec(s, out_edges, e.dst, prefix, visit_limit, visits, found, complete);
        if (emits) prefix.pop_back();
    }
}

} // namespace

extraction extract_marked(const synchronizer& s, size_t path_limit) {
    std::vector<std::vector<int>> out_edges(s.nodes.size());
    for (size_t i = 0; i < s.edges.size(); ++i) out_edges[s.edges[i].src].push_back(i);
    extraction r;
    std::set<costed_seq> found;
    sym_seq prefix;
    size_t visits = 0;
    extract_rec(s, out_edges, s.root, prefix, path_limit, visits, found, r.complete);
    r.sequences.assign(found.begin(), found.end());
    return r;
}

synchronizer build_plain_synchronizer(const plant& p, const si_state& tau, const state_set& q0) {
    release_fn releases = [&p](const sync_node& node, const state_set* est) {
        std::vector<release_candidate> cands;
        for (event_idx e : releasable_heads(p, node.tau)) {
            if (est && p.observable_reach(*est, e).empty()) continue;
            cands.push_back({sync_label{label_none, {e}}, *sbuilder_release(p, node.tau, e), 0,
                             false});
        }
        return cands;
    };
    update_fn update = [&p](const state_set& est, const sync_label& label) {
        return p.unobservable_reach(p.observable_reach(est, label.received[0]));
    };
    synchronizer s = build_by_release(sync_kind::plain, p.num_sites(), tau,
                                      p.unobservable_reach(q0), releases, update);
    s.decoded.resize(s.nodes.size());
    for (size_t i = 0; i < s.nodes.size(); ++i)
        for (state_idx q : s.estimates[i]) s.decoded[i].emplace_back(q, 0);
    return s;
}

state_set estimate_error_free(const plant& p, const si_state& tau, const state_set& q0) {
    return ending_estimate(build_plain_synchronizer(p, tau, q0));
}

} // namespace detsynth
