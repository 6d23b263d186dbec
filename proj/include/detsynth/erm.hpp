#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "detsynth/plant.hpp"

namespace detsynth {

// Symbol of an error table: index into its alphabet, or eps_sym.
using sym = int;
inline constexpr sym eps_sym = -1;
using sym_seq = std::vector<sym>;

struct costed_seq {
    sym_seq seq;
    int cost = 0;
    auto operator<=>(const costed_seq&) const = default;
};

// Set of achievable costs in {0..bound}, as a bitset.
class cost_set {
public:
    explicit cost_set(int bound) : bound_(bound), words_((bound_ >> 6) + 1, 0) {}
    int bound() const { return bound_; }
    bool test(int v) const {
        return v >= 0 && v <= bound_ && (words_[v >> 6] >> (v & 63)) & 1;
    }
    void set(int v) {
        if (v >= 0 && v <= bound_) words_[v >> 6] |= uint64_t{1} << (v & 63);
    }
    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    // {v + k | v in this, v + k <= bound}
    cost_set shifted(int k) const;
    void merge(const cost_set& o);
    std::vector<int> values() const;
    bool operator==(const cost_set&) const = default;

private:
    int bound_;
    std::vector<uint64_t> words_;
};

struct erm_entry {
    std::string from; // symbol name or "eps"
    std::string to;
    int cost = 0;
};

// Error relation matrix over alphabet + eps with a total cost budget. Missing
// pairs are infinitely expensive; the diagonal is free.
class erm {
public:
    erm(std::vector<std::string> alphabet, int cost_bound, std::vector<erm_entry> entries);

    static erm identity(std::vector<std::string> alphabet, int cost_bound);

    const std::vector<std::string>& alphabet() const { return alphabet_; }
    int size() const { return static_cast<int>(alphabet_.size()); }
    int cost_bound() const { return cost_bound_; }
    std::optional<sym> find_sym(const std::string& name) const;
    const std::string& sym_name(sym s) const; // handles eps_sym

    // nullopt when the action is not in the relation.
    std::optional<int> cost(sym from, sym to) const;

    // Well-formedness diagnostics; empty means valid. Rejects nonzero
    // diagonal entries and zero-cost insertions or deletions (either would
    // make the bounded erroneous set infinite or the search space unbounded).
    std::vector<std::string> validate() const;
    void ensure_valid() const;

private:
    int cell(sym a, sym b) const { return (a + 1) * (size() + 1) + (b + 1); }
    std::vector<std::string> alphabet_;
    int cost_bound_ = 0;
    std::vector<int> matrix_; // -1 == infinity
};

// Maps plant events to table symbols. Produced by the bind helpers below,
// which require the table alphabet to match the plant alphabet exactly.
struct erm_binding {
    const erm* table = nullptr;
    std::vector<sym> ev_to_sym;       // indexed by plant event; -2 when absent
    std::vector<event_idx> sym_to_ev; // indexed by table symbol

    std::optional<int> cost_ev(event_idx from_ev, event_idx to_ev) const; // -1 == eps
    sym_seq to_syms(std::span<const event_idx> events) const;
    std::vector<event_idx> to_events(const sym_seq& syms) const;
};

// Table alphabet must equal the plant's jointly observable alphabet.
erm_binding bind_global(const erm& table, const plant& p);
// Table alphabet must equal the 1-based site's alphabet.
erm_binding bind_site(const erm& table, const plant& p, int site);

// One error table per site sharing a single cumulative budget.
struct local_erm_set {
    int cost_bound = 0;
    std::vector<erm> per_site;

    std::vector<std::string> validate() const;
    void ensure_valid() const;
};

std::vector<erm_binding> bind_local(const local_erm_set& tables, const plant& p);

// All sequences obtainable from w by per-symbol replacement or deletion and
// arbitrarily placed insertions, with every achievable total cost <= bound.
// Pair semantics: the same sequence may appear once per achievable cost.
std::vector<costed_seq> erroneous_set(const erm& table, const sym_seq& w,
                                      size_t max_results = 1u << 20);

// Set of costs c <= bound at which w can be tampered into wr. Dynamic program
// over alignment prefixes carrying achievable-cost sets.
cost_set tamper_costs(const erm& table, const sym_seq& w, const sym_seq& wr);

} // namespace detsynth
