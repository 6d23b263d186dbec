#include "detsynth/sim.hpp"

#include <algorithm>

namespace detsynth {

rng_t scenario_rng(uint64_t seed, uint64_t index) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
    return rng_t(seq);
}

uint64_t pick(rng_t& rng, uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

bool chance(rng_t& rng, double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

plant random_plant(rng_t& rng, const gen_config& cfg) {
    int n_states =
        cfg.min_states + static_cast<int>(pick(rng, cfg.max_states - cfg.min_states + 1));
    int n_events = 1 + static_cast<int>(pick(rng, cfg.max_events));
    int m = 1 + static_cast<int>(pick(rng, cfg.max_sites));

    std::vector<std::string> states;
    for (int i = 0; i < n_states; ++i) states.push_back("s" + std::to_string(i));

    std::vector<plant_event_decl> events;
    for (int i = 0; i < n_events; ++i) {
        plant_event_decl e;
        e.name = std::string(1, static_cast<char>('a' + i));
        if (!chance(rng, cfg.unobservable_prob)) {
            if (m >= 2 && chance(rng, cfg.shared_event_prob)) {
                int first = 1 + static_cast<int>(pick(rng, m));
                int second = 1 + static_cast<int>(pick(rng, m));
                while (second == first) second = 1 + static_cast<int>(pick(rng, m));
                e.observers = {first, second};
            } else {
                e.observers = {1 + static_cast<int>(pick(rng, m))};
            }
        }
        events.push_back(e);
    }

    std::vector<plant_transition> trans;
    for (int q = 0; q < n_states; ++q)
        for (int e = 0; e < n_events; ++e)
            if (chance(rng, cfg.transition_prob)) {
                int fanout = chance(rng, 0.2) ? 2 : 1;
                for (int k = 0; k < fanout; ++k)
                    trans.push_back({states[q], events[e].name,
                                     states[pick(rng, n_states)]});
            }

    std::vector<std::string> initial{states[pick(rng, n_states)]};
    return plant::make(std::move(states), std::move(initial), m, std::move(events),
                       std::move(trans));
}

erm random_erm(rng_t& rng, const plant& p, int cost_bound, const gen_config& cfg) {
    std::vector<std::string> alphabet;
    for (event_idx e : p.observable_events()) alphabet.push_back(p.event_name(e));
    std::vector<erm_entry> entries;
    auto names = alphabet;
    names.push_back("eps");
    for (const auto& from : names)
        for (const auto& to : names) {
            if (from == to) continue;
            if (!chance(rng, cfg.erm_density)) continue;
            bool eps_side = from == "eps" || to == "eps";
            int lo = eps_side ? 1 : 0;
            int hi = std::max(lo, std::max(1, cost_bound));
            int cost = lo + static_cast<int>(pick(rng, hi - lo + 1));
            entries.push_back({from, to, cost});
        }
    return erm(std::move(alphabet), cost_bound, std::move(entries));
}

local_erm_set random_local_erms(rng_t& rng, const plant& p, int cost_bound,
                                const gen_config& cfg) {
    local_erm_set set;
    set.cost_bound = cost_bound;
    for (int site = 1; site <= p.num_sites(); ++site) {
        std::vector<std::string> alphabet;
        for (event_idx e : p.site_alphabet(site)) alphabet.push_back(p.event_name(e));
        std::vector<erm_entry> entries;
        auto names = alphabet;
        names.push_back("eps");
        for (const auto& from : names)
            for (const auto& to : names) {
                if (from == to) continue;
                if (!chance(rng, cfg.erm_density)) continue;
                bool eps_side = from == "eps" || to == "eps";
                int lo = eps_side ? 1 : 0;
                int hi = std::max(lo, std::max(1, cost_bound));
                int cost = lo + static_cast<int>(pick(rng, hi - lo + 1));
                entries.push_back({from, to, cost});
            }
        set.per_site.emplace_back(std::move(alphabet), cost_bound, std::move(entries));
    }
    return set;
}

si_state random_si_state(rng_t& rng, const plant& p, const gen_config& cfg) {
    si_state tau;
    tau.seqs.resize(p.num_sites());
    for (int site = 1; site <= p.num_sites(); ++site) {
        const auto& alphabet = p.site_alphabet(site);
        if (alphabet.empty()) continue;
        int len = static_cast<int>(pick(rng, cfg.max_component_length + 1));
        for (int k = 0; k < len; ++k)
            tau.seqs[site - 1].push_back(alphabet[pick(rng, alphabet.size())]);
    }
    return tau;
}

run_sample sample_run(const plant& p, const state_set& q0, int len, rng_t& rng) {
    run_sample sample;
    if (q0.empty()) throw validation_error("sample_run needs a nonempty start set");
    state_idx cur = q0[pick(rng, q0.size())];
    for (int step = 0; step < len; ++step) {
        const auto& options = p.out(cur);
        if (options.empty()) {
            sample.truncated = true;
            break;
        }
        auto [e, dst] = options[pick(rng, options.size())];
        sample.run.push_back(e);
        cur = dst;
    }
    sample.final_state = cur;
    state_set states = q0;
    for (event_idx e : sample.run) {
        state_set next;
        for (state_idx q : states)
            for (state_idx dst : p.targets(q, e)) next.push_back(dst);
        states = normalize(std::move(next));
    }
    sample.finals = std::move(states);
    return sample;
}

namespace {

// Draws a script over one table: optional insertions around each position,
// then keep/replace/delete per symbol, within the remaining budget. The
// alphabet is the table's own (the union alphabet or one site's).
struct script_sampler {
    const std::vector<event_idx>& alphabet;
    const erm_binding& bind;
    rng_t& rng;
    int remaining;
    int cost = 0;
    std::vector<event_idx> out;

    void maybe_insert() {
        while (remaining > 0 && chance(rng, 0.3)) {
            std::vector<std::pair<event_idx, int>> options;
            for (event_idx e : alphabet)
                if (auto k = bind.cost_ev(label_eps, e); k && *k <= remaining)
                    options.emplace_back(e, *k);
            if (options.empty()) return;
            auto [e, k] = options[pick(rng, options.size())];
            out.push_back(e);
            cost += k;
            remaining -= k;
        }
    }

    void consume(event_idx x) {
        maybe_insert();
        if (!chance(rng, 0.45)) {
            out.push_back(x);
            return;
        }
        std::vector<std::pair<int, int>> options; // (received or label_eps, cost)
        for (event_idx y : alphabet) {
            if (y == x) continue;
            if (auto k = bind.cost_ev(x, y); k && *k <= remaining) options.emplace_back(y, *k);
        }
        if (auto k = bind.cost_ev(x, label_eps); k && *k <= remaining)
            options.emplace_back(label_eps, *k);
        if (options.empty()) {
            out.push_back(x);
            return;
        }
        auto [y, k] = options[pick(rng, options.size())];
        if (y != label_eps) out.push_back(y);
        cost += k;
        remaining -= k;
    }
};

} // namespace

tampered tamper_global(const plant& p, const erm& table, std::span<const event_idx> run,
                       rng_t& rng) {
    table.ensure_valid();
    erm_binding bind = bind_global(table, p);
    auto omega = p.project_observable(run);
    script_sampler s{p.observable_events(), bind, rng, table.cost_bound(), 0, {}};
    for (event_idx x : omega) s.consume(x);
    s.maybe_insert();

    tampered t;
    t.received = s.out;
    t.cost = s.cost;
    t.si.seqs.resize(p.num_sites());
    for (int site = 1; site <= p.num_sites(); ++site)
        t.si.seqs[site - 1] = p.project(s.out, site);
    return t;
}

tampered tamper_local(const plant& p, const local_erm_set& tables,
                      std::span<const event_idx> run, rng_t& rng) {
    tables.ensure_valid();
    auto binds = bind_local(tables, p);
    tampered t;
    t.si.seqs.resize(p.num_sites());
    int remaining = tables.cost_bound;
    for (int site = 1; site <= p.num_sites(); ++site) {
        auto pi = p.project(run, site);
        script_sampler s{p.site_alphabet(site), binds[site - 1], rng, remaining, 0, {}};
        for (event_idx x : pi) s.consume(x);
        s.maybe_insert();
        t.si.seqs[site - 1] = s.out;
        t.cost += s.cost;
        remaining -= s.cost;
    }
    return t;
}

containment_report containment_batch(sim_mode mode, int n, uint64_t seed,
                                     const gen_config& cfg) {
    containment_report report;
    report.mode = mode;
    report.seed = seed;
    for (int i = 0; i < n; ++i) {
        rng_t rng = scenario_rng(seed, static_cast<uint64_t>(i));
        plant p = random_plant(rng, cfg);
        int cu = static_cast<int>(pick(rng, cfg.max_cost_bound + 1));
        run_sample run = sample_run(p, p.initial(), cfg.run_length, rng);

        scenario_outcome outcome;
        outcome.index = static_cast<uint64_t>(i);
        outcome.true_state = p.state_name(run.final_state);

        estimate_set system, builder;
        std::optional<erm> gt;
        std::optional<local_erm_set> lt;
        si_state si = empty_si_state(p);
        if (mode == sim_mode::global) {
            gt = random_erm(rng, p, cu, cfg);
            tampered t = tamper_global(p, *gt, run.run, rng);
            si = t.si;
            outcome.true_cost = t.cost;
            system = estimate_global_system(p, *gt, si, p.initial());
            builder = estimate_global_builder(p, *gt, si, p.initial());
        } else {
            lt = random_local_erms(rng, p, cu, cfg);
            tampered t = tamper_local(p, *lt, run.run, rng);
            si = t.si;
            outcome.true_cost = t.cost;
            system = estimate_local_system(p, *lt, si, p.initial());
            builder = estimate_local_builder(p, *lt, si, p.initial());
        }
        outcome.system_estimates = system.size();
        outcome.builder_estimates = builder.size();
        estimate_pair truth{run.final_state, outcome.true_cost};
        outcome.ok = std::binary_search(system.begin(), system.end(), truth) &&
                     std::binary_search(builder.begin(), builder.end(), truth);
        if (!outcome.ok) {
            report.all_ok = false;
            outcome.repro = scenario_repro{p, gt, lt, si, run.run};
        }
        report.outcomes.push_back(std::move(outcome));
    }
    return report;
}

} // namespace detsynth
