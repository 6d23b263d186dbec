#include "detsynth/oracle.hpp"

#include <algorithm>
#include <functional>

namespace detsynth {

namespace {

void check_caps(const si_state& tau, int cost_bound, const oracle_caps& caps, int needed_len) {
    for (size_t i = 0; i < tau.seqs.size(); ++i)
        if (static_cast<int>(tau.seqs[i].size()) > caps.max_component_length)
            throw resource_error("oracle: component " + std::to_string(i + 1) +
                                 " exceeds max_component_length");
    if (cost_bound > caps.max_cost)
        throw resource_error("oracle: cost bound exceeds max_cost");
    if (needed_len > caps.max_run_length)
        throw resource_error("oracle: witness bound " + std::to_string(needed_len) +
                             " exceeds max_run_length " +
                             std::to_string(caps.max_run_length));
}

// Alignment rows against one target sequence: row[j] holds the achievable
// costs of mapping the consumed original prefix onto target[0..j).
struct dp_row {
    std::vector<cost_set> cells;

    static dp_row initial(const erm& t, const sym_seq& target) {
        dp_row r;
        r.cells.assign(target.size() + 1, cost_set(t.cost_bound()));
        r.cells[0].set(0);
        for (size_t j = 1; j <= target.size(); ++j)
            if (auto ins = t.cost(eps_sym, target[j - 1]))
                r.cells[j] = r.cells[j - 1].shifted(*ins);
        return r;
    }

    dp_row extended(const erm& t, const sym_seq& target, sym x) const {
        dp_row r;
        r.cells.assign(target.size() + 1, cost_set(t.cost_bound()));
        auto del = t.cost(x, eps_sym);
        if (del) r.cells[0] = cells[0].shifted(*del);
        for (size_t j = 1; j <= target.size(); ++j) {
            cost_set acc(t.cost_bound());
            if (del) acc.merge(cells[j].shifted(*del));
            if (auto ins = t.cost(eps_sym, target[j - 1]))
                acc.merge(r.cells[j - 1].shifted(*ins));
            if (auto sub = t.cost(x, target[j - 1])) acc.merge(cells[j - 1].shifted(*sub));
            r.cells[j] = std::move(acc);
        }
        return r;
    }

    bool dead() const {
        for (const auto& c : cells)
            if (!c.empty()) return false;
        return true;
    }
    const cost_set& final() const { return cells.back(); }
};

// Walks observation sequences over the union alphabet up to max_len,
// maintaining observer states when a start set is given and pruning branches
// whose alignment rows are all dead. `advance` grows the per-target rows and
// reports liveness; `visit` consumes each surviving node.
struct obs_walker {
    const plant& p;
    const oracle_caps& caps;
    size_t visited = 0;

    void walk(int max_len, const state_set* q0,
              const std::function<bool(sym /*plant event*/)>& advance,
              const std::function<void()>& retract,
              const std::function<void(const std::vector<event_idx>&, const state_set*)>& visit) {
        std::vector<event_idx> omega;
        std::optional<state_set> states;
        if (q0) states = p.unobservable_reach(*q0);
        rec(max_len, omega, states ? &*states : nullptr, advance, retract, visit);
    }

private:
    void rec(int max_len, std::vector<event_idx>& omega, const state_set* states,
             const std::function<bool(sym)>& advance, const std::function<void()>& retract,
             const std::function<void(const std::vector<event_idx>&, const state_set*)>& visit) {
        if (++visited > caps.max_nodes)
            throw resource_error("oracle: node budget exhausted");
        visit(omega, states);
        if (static_cast<int>(omega.size()) >= max_len) return;
        for (event_idx e : p.observable_events()) {
            std::optional<state_set> next_states;
            if (states) {
                next_states = p.unobservable_reach(p.observable_reach(*states, e));
                if (next_states->empty()) continue;
            }
            if (!advance(e)) continue; // advance returns false when all rows died
            omega.push_back(e);
            rec(max_len, omega, next_states ? &*next_states : nullptr, advance, retract, visit);
            omega.pop_back();
            retract();
        }
    }
};

} // namespace

estimate_set oracle_global(const plant& p, const erm& table, const si_state& tau,
                           const state_set& q0, const oracle_caps& caps) {
    table.ensure_valid();
    erm_binding bind = bind_global(table, p);
    const int needed = tau.total_length() + table.cost_bound();
    check_caps(tau, table.cost_bound(), caps, needed);

    std::vector<sym_seq> targets;
    for (const auto& to : enumerate_to_sequences(p, tau, caps.max_component_length))
        targets.push_back(bind.to_syms(to));

    std::vector<std::vector<dp_row>> stack;
    std::vector<dp_row> root;
    for (const auto& t : targets) root.push_back(dp_row::initial(table, t));
    stack.push_back(std::move(root));

    estimate_set result;
    obs_walker walker{p, caps};
    walker.walk(
        needed, &q0,
        [&](sym e) {
            std::vector<dp_row> next;
            bool live = targets.empty() ? false : true;
            bool any = false;
            for (size_t r = 0; r < targets.size(); ++r) {
                next.push_back(stack.back()[r].extended(table, targets[r], bind.ev_to_sym[e]));
                if (!next.back().dead()) any = true;
            }
            live = any;
            if (!live) return false;
            stack.push_back(std::move(next));
            return true;
        },
        [&] { stack.pop_back(); },
        [&](const std::vector<event_idx>&, const state_set* states) {
            cost_set costs(table.cost_bound());
            for (size_t r = 0; r < targets.size(); ++r) costs.merge(stack.back()[r].final());
            for (int c : costs.values())
                for (state_idx q : *states) result.emplace_back(q, c);
        });
    return normalize_estimates(std::move(result));
}

std::vector<costed_seq> oracle_geto(const plant& p, const erm& table, const si_state& tau,
                                    const oracle_caps& caps, const state_set* q0) {
    table.ensure_valid();
    erm_binding bind = bind_global(table, p);
    const int needed = tau.total_length() + table.cost_bound();
    check_caps(tau, table.cost_bound(), caps, needed);

    std::vector<sym_seq> targets;
    for (const auto& to : enumerate_to_sequences(p, tau, caps.max_component_length))
        targets.push_back(bind.to_syms(to));

    std::vector<std::vector<dp_row>> stack;
    std::vector<dp_row> root;
    for (const auto& t : targets) root.push_back(dp_row::initial(table, t));
    stack.push_back(std::move(root));

    std::vector<costed_seq> result;
    obs_walker walker{p, caps};
    walker.walk(
        needed, q0,
        [&](sym e) {
            std::vector<dp_row> next;
            bool any = false;
            for (size_t r = 0; r < targets.size(); ++r) {
                next.push_back(stack.back()[r].extended(table, targets[r], bind.ev_to_sym[e]));
                if (!next.back().dead()) any = true;
            }
            if (!any) return false;
            stack.push_back(std::move(next));
            return true;
        },
        [&] { stack.pop_back(); },
        [&](const std::vector<event_idx>& omega, const state_set*) {
            cost_set costs(table.cost_bound());
            for (size_t r = 0; r < targets.size(); ++r) costs.merge(stack.back()[r].final());
            for (int c : costs.values()) result.push_back({sym_seq(omega.begin(), omega.end()), c});
        });
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

namespace {

// Per-site alignment rows for the local problems; site i tracks the mapping
// of the site-projected original prefix onto tau's component i.
struct local_rows {
    std::vector<dp_row> rows;

    bool dead() const {
        for (const auto& r : rows)
            if (r.dead()) return true; // one dead site kills the branch
        return false;
    }
};

cost_set combine_site_costs(const std::vector<dp_row>& rows, int cu) {
    cost_set acc(cu);
    acc.set(0);
    for (const auto& r : rows) {
        cost_set next(cu);
        for (int k : r.final().values()) next.merge(acc.shifted(k));
        acc = next;
        if (acc.empty()) break;
    }
    return acc;
}

} // namespace

estimate_set oracle_local(const plant& p, const local_erm_set& tables, const si_state& tau,
                          const state_set& q0, const oracle_caps& caps) {
    tables.ensure_valid();
    auto binds = bind_local(tables, p);
    const int cu = tables.cost_bound;
    const int needed = tau.total_length() + cu;
    check_caps(tau, cu, caps, needed);

    const int m = p.num_sites();
    std::vector<sym_seq> targets(m);
    for (int i = 0; i < m; ++i) targets[i] = binds[i].to_syms(tau.seqs[i]);

    std::vector<local_rows> stack;
    local_rows root;
    for (int i = 0; i < m; ++i)
        root.rows.push_back(dp_row::initial(tables.per_site[i], targets[i]));
    stack.push_back(std::move(root));

    estimate_set result;
    obs_walker walker{p, caps};
    walker.walk(
        needed, &q0,
        [&](sym e) {
            local_rows next = stack.back();
            for (int site : p.observers(e)) {
                int i = site - 1;
                next.rows[i] = next.rows[i].extended(tables.per_site[i], targets[i],
                                                     binds[i].ev_to_sym[e]);
            }
            if (next.dead()) return false;
            stack.push_back(std::move(next));
            return true;
        },
        [&] { stack.pop_back(); },
        [&](const std::vector<event_idx>&, const state_set* states) {
            cost_set costs = combine_site_costs(stack.back().rows, cu);
            for (int c : costs.values())
                for (state_idx q : *states) result.emplace_back(q, c);
        });
    return normalize_estimates(std::move(result));
}

std::vector<costed_seq> oracle_leto(const plant& p, const local_erm_set& tables,
                                    const si_state& tau, const oracle_caps& caps,
                                    const state_set* q0) {
    tables.ensure_valid();
    auto binds = bind_local(tables, p);
    const int cu = tables.cost_bound;
    const int needed = tau.total_length() + cu;
    check_caps(tau, cu, caps, needed);

    const int m = p.num_sites();
    std::vector<sym_seq> targets(m);
    for (int i = 0; i < m; ++i) targets[i] = binds[i].to_syms(tau.seqs[i]);

    std::vector<local_rows> stack;
    local_rows root;
    for (int i = 0; i < m; ++i)
        root.rows.push_back(dp_row::initial(tables.per_site[i], targets[i]));
    stack.push_back(std::move(root));

    std::vector<costed_seq> result;
    obs_walker walker{p, caps};
    walker.walk(
        needed, q0,
        [&](sym e) {
            local_rows next = stack.back();
            for (int site : p.observers(e)) {
                int i = site - 1;
                next.rows[i] = next.rows[i].extended(tables.per_site[i], targets[i],
                                                     binds[i].ev_to_sym[e]);
            }
            if (next.dead()) return false;
            stack.push_back(std::move(next));
            return true;
        },
        [&] { stack.pop_back(); },
        [&](const std::vector<event_idx>& omega, const state_set*) {
            cost_set costs = combine_site_costs(stack.back().rows, cu);
            for (int c : costs.values()) result.push_back({sym_seq(omega.begin(), omega.end()), c});
        });
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

} // namespace detsynth
