#include "detsynth/erm.hpp"

#include <algorithm>
#include <set>

namespace detsynth {

cost_set cost_set::shifted(int k) const {
    cost_set r(bound_);
    if (k < 0) throw invariant_error("negative cost shift");
    for (int v = 0; v + k <= bound_; ++v)
        if (test(v)) r.set(v + k);
    return r;
}

void cost_set::merge(const cost_set& o) {
    if (o.bound_ != bound_) throw invariant_error("cost_set bound mismatch");
    for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
}

std::vector<int> cost_set::values() const {
    std::vector<int> r;
    for (int v = 0; v <= bound_; ++v)
        if (test(v)) r.push_back(v);
    return r;
}

erm::erm(std::vector<std::string> alphabet, int cost_bound, std::vector<erm_entry> entries)
    : cost_bound_(cost_bound) {
    if (cost_bound < 0)
        throw validation_error("cost_bound must be >= 0, got " + std::to_string(cost_bound));
    std::sort(alphabet.begin(), alphabet.end());
    for (size_t i = 0; i + 1 < alphabet.size(); ++i)
        if (alphabet[i] == alphabet[i + 1])
            throw validation_error("duplicate alphabet symbol '" + alphabet[i] + "'");
    for (const auto& a : alphabet)
        if (a == "eps") throw validation_error("'eps' cannot be an alphabet symbol");
    alphabet_ = std::move(alphabet);

    matrix_.assign((size() + 1) * (size() + 1), -1);
    for (sym s = eps_sym; s < size(); ++s) matrix_[cell(s, s)] = 0;

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : entries) {
        auto resolve = [&](const std::string& name) -> sym {
            if (name == "eps") return eps_sym;
            auto s = find_sym(name);
            if (!s)
                throw validation_error("ERM entry symbol '" + name + "' not in alphabet");
            return *s;
        };
        sym from = resolve(e.from);
        sym to = resolve(e.to);
        if (!seen.insert({e.from, e.to}).second)
            throw validation_error("duplicate ERM entry (" + e.from + ", " + e.to + ")");
        if (e.cost < 0)
            throw validation_error("ERM entry (" + e.from + ", " + e.to + ") has negative cost");
        matrix_[cell(from, to)] = e.cost;
    }
}

erm erm::identity(std::vector<std::string> alphabet, int cost_bound) {
    return erm(std::move(alphabet), cost_bound, {});
}

std::optional<sym> erm::find_sym(const std::string& name) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), name);
    if (it == alphabet_.end() || *it != name) return std::nullopt;
    return static_cast<sym>(it - alphabet_.begin());
}

const std::string& erm::sym_name(sym s) const {
    static const std::string eps = "eps";
    if (s == eps_sym) return eps;
    return alphabet_[s];
}

std::optional<int> erm::cost(sym from, sym to) const {
    int v = matrix_[cell(from, to)];
    if (v < 0) return std::nullopt;
    return v;
}

std::vector<std::string> erm::validate() const {
    std::vector<std::string> diags;
    for (sym s = eps_sym; s < size(); ++s) {
        auto d = cost(s, s);
        if (!d || *d != 0)
            diags.push_back("cost(" + sym_name(s) + ", " + sym_name(s) + ") must be 0");
    }
    for (sym s = 0; s < size(); ++s) {
        auto ins = cost(eps_sym, s);
        if (ins && *ins == 0)
            diags.push_back("cost(eps, " + sym_name(s) +
                            ") = 0: zero-cost insertion not allowed");
        auto del = cost(s, eps_sym);
        if (del && *del == 0)
            diags.push_back("cost(" + sym_name(s) +
                            ", eps) = 0: zero-cost deletion not allowed");
    }
    return diags;
}

void erm::ensure_valid() const {
    auto diags = validate();
    if (!diags.empty()) throw validation_error("invalid ERM: " + diags.front());
}

std::optional<int> erm_binding::cost_ev(event_idx from_ev, event_idx to_ev) const {
    auto to_sym = [&](event_idx e) -> sym {
        if (e < 0) return eps_sym;
        sym s = ev_to_sym[e];
        if (s == -2)
            throw invariant_error("event not covered by bound ERM");
        return s;
    };
    return table->cost(to_sym(from_ev), to_sym(to_ev));
}

sym_seq erm_binding::to_syms(std::span<const event_idx> events) const {
    sym_seq r;
    r.reserve(events.size());
    for (event_idx e : events) {
        sym s = ev_to_sym[e];
        if (s == -2) throw invariant_error("event not covered by bound ERM");
        r.push_back(s);
    }
    return r;
}

std::vector<event_idx> erm_binding::to_events(const sym_seq& syms) const {
    std::vector<event_idx> r;
    r.reserve(syms.size());
    for (sym s : syms) r.push_back(sym_to_ev[s]);
    return r;
}

namespace {

erm_binding bind_events(const erm& table, const plant& p, const std::vector<event_idx>& events,
                        const std::string& what) {
    std::vector<std::string> expected;
    for (event_idx e : events) expected.push_back(p.event_name(e));
    std::sort(expected.begin(), expected.end());
    if (expected != table.alphabet())
        throw validation_error("ERM alphabet does not match " + what);
    erm_binding b;
    b.table = &table;
    b.ev_to_sym.assign(p.num_events(), -2);
    b.sym_to_ev.assign(table.size(), -1);
    for (event_idx e : events) {
        sym s = *table.find_sym(p.event_name(e));
        b.ev_to_sym[e] = s;
        b.sym_to_ev[s] = e;
    }
    return b;
}

} // namespace

erm_binding bind_global(const erm& table, const plant& p) {
    return bind_events(table, p, p.observable_events(), "the plant's observable alphabet");
}

erm_binding bind_site(const erm& table, const plant& p, int site) {
    return bind_events(table, p, p.site_alphabet(site),
                       "the alphabet of site " + std::to_string(site));
}

std::vector<std::string> local_erm_set::validate() const {
    std::vector<std::string> diags;
    for (size_t i = 0; i < per_site.size(); ++i) {
        if (per_site[i].cost_bound() != cost_bound)
            diags.push_back("site " + std::to_string(i + 1) +
                            " table bound differs from the shared bound");
        for (const auto& d : per_site[i].validate())
            diags.push_back("site " + std::to_string(i + 1) + ": " + d);
    }
    return diags;
}

void local_erm_set::ensure_valid() const {
    auto diags = validate();
    if (!diags.empty()) throw validation_error("invalid local ERM set: " + diags.front());
}

std::vector<erm_binding> bind_local(const local_erm_set& tables, const plant& p) {
    if (static_cast<int>(tables.per_site.size()) != p.num_sites())
        throw validation_error("local ERM set has " + std::to_string(tables.per_site.size()) +
                               " sites, plant has " + std::to_string(p.num_sites()));
    std::vector<erm_binding> bindings;
    for (int i = 1; i <= p.num_sites(); ++i)
        bindings.push_back(bind_site(tables.per_site[i - 1], p, i));
    return bindings;
}

namespace {

struct erroneous_gen {
    const erm& table;
    const sym_seq& w;
    size_t cap;
    std::set<costed_seq> results;
    sym_seq cur;

    void emit(int cost) {
        results.insert({cur, cost});
        if (results.size() > cap)
            throw resource_error("erroneous_set exceeds " + std::to_string(cap) + " members");
    }

    void go(size_t pos, int cost) {
        if (pos == w.size()) {
            emit(cost);
        } else {
            // replacement, deletion, or error-less copy of w[pos]
            for (sym to = eps_sym; to < table.size(); ++to) {
                auto k = table.cost(w[pos], to);
                if (!k || cost + *k > table.cost_bound()) continue;
                if (to != eps_sym) cur.push_back(to);
                go(pos + 1, cost + *k);
                if (to != eps_sym) cur.pop_back();
            }
        }
        // insertions before w[pos] (or trailing when pos == |w|); insertion
        // cost >= 1 is enforced by validation, so this recursion terminates
        for (sym to = 0; to < table.size(); ++to) {
            auto k = table.cost(eps_sym, to);
            if (!k || cost + *k > table.cost_bound()) continue;
            cur.push_back(to);
            go(pos, cost + *k);
            cur.pop_back();
        }
    }
};

} // namespace

std::vector<costed_seq> erroneous_set(const erm& table, const sym_seq& w, size_t max_results) {
    table.ensure_valid();
    erroneous_gen gen{table, w, max_results, {}, {}};
    gen.go(0, 0);
    return {gen.results.begin(), gen.results.end()};
}

cost_set tamper_costs(const erm& table, const sym_seq& w, const sym_seq& wr) {
    table.ensure_valid();
    const int cu = table.cost_bound();
    // row[j]: achievable costs mapping the consumed prefix of w to wr[0..j)
    std::vector<cost_set> row(wr.size() + 1, cost_set(cu));
    row[0].set(0);
    for (size_t j = 1; j <= wr.size(); ++j) {
        auto ins = table.cost(eps_sym, wr[j - 1]);
        if (ins) row[j] = row[j - 1].shifted(*ins);
    }
    for (size_t i = 1; i <= w.size(); ++i) {
        std::vector<cost_set> next(wr.size() + 1, cost_set(cu));
        auto del = table.cost(w[i - 1], eps_sym);
        if (del) next[0] = row[0].shifted(*del);
        for (size_t j = 1; j <= wr.size(); ++j) {
            cost_set acc(cu);
            if (del) acc.merge(row[j].shifted(*del));
            auto ins = table.cost(eps_sym, wr[j - 1]);
            if (ins) acc.merge(next[j - 1].shifted(*ins));
            auto sub = table.cost(w[i - 1], wr[j - 1]);
            if (sub) acc.merge(row[j - 1].shifted(*sub));
            next[j] = std::move(acc);
        }
        row = std::move(next);
    }
    return row[wr.size()];
}

} // namespace detsynth
