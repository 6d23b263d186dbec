#include "detsynth/sistate.hpp"

#include <algorithm>
#include <map>

namespace detsynth {

si_state make_si_state(const plant& p, const std::vector<std::vector<std::string>>& seqs,
                       int component_cap) {
    if (static_cast<int>(seqs.size()) != p.num_sites())
        throw validation_error("SI-state has " + std::to_string(seqs.size()) +
                               " components, plant has " + std::to_string(p.num_sites()) +
                               " sites");
    si_state tau;
    tau.seqs.resize(seqs.size());
    for (size_t i = 0; i < seqs.size(); ++i) {
        if (static_cast<int>(seqs[i].size()) > component_cap)
            throw resource_error("site " + std::to_string(i + 1) + " sequence length " +
                                 std::to_string(seqs[i].size()) + " exceeds cap " +
                                 std::to_string(component_cap));
        for (const auto& name : seqs[i]) {
            event_idx e = p.require_event(name);
            if (!p.observed_by(e, static_cast<int>(i) + 1))
                throw validation_error("event '" + name + "' is not observable by site " +
                                       std::to_string(i + 1));
            tau.seqs[i].push_back(e);
        }
    }
    return tau;
}

si_state empty_si_state(const plant& p) {
    si_state tau;
    tau.seqs.resize(p.num_sites());
    return tau;
}

std::string to_string(const plant& p, const si_state& tau) {
    std::string r = "(";
    for (size_t i = 0; i < tau.seqs.size(); ++i) {
        if (i) r += ", ";
        if (tau.seqs[i].empty()) {
            r += "eps";
        } else {
            for (size_t j = 0; j < tau.seqs[i].size(); ++j) {
                if (j) r += ".";
                r += p.event_name(tau.seqs[i][j]);
            }
        }
    }
    return r + ")";
}

std::optional<si_state> sbuilder_release(const plant& p, const si_state& tau, event_idx e) {
    if (!p.observable(e))
        throw validation_error("cannot release unobservable event '" + p.event_name(e) + "'");
    si_state next = tau;
    for (int site : p.observers(e)) {
        auto& comp = next.seqs[site - 1];
        if (comp.empty() || comp.front() != e) return std::nullopt;
        comp.erase(comp.begin());
    }
    return next;
}

std::vector<event_idx> releasable_heads(const plant& p, const si_state& tau) {
    std::vector<event_idx> heads;
    for (const auto& comp : tau.seqs)
        if (!comp.empty()) heads.push_back(comp.front());
    std::sort(heads.begin(), heads.end());
    heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
    std::vector<event_idx> r;
    for (event_idx e : heads)
        if (sbuilder_release(p, tau, e)) r.push_back(e);
    return r;
}

namespace {

const std::set<std::vector<event_idx>>& to_sequences_rec(
    const plant& p, const si_state& tau,
    std::map<si_state, std::set<std::vector<event_idx>>>& memo) {
    auto it = memo.find(tau);
    if (it != memo.end()) return it->second;
    std::set<std::vector<event_idx>> result;
    if (tau.empty()) {
        result.insert(std::vector<event_idx>{});
    } else {
        for (event_idx e : releasable_heads(p, tau)) {
            const auto& rest = to_sequences_rec(p, *sbuilder_release(p, tau, e), memo);
            for (const auto& seq : rest) {
                std::vector<event_idx> full;
                full.reserve(seq.size() + 1);
                full.push_back(e);
                full.insert(full.end(), seq.begin(), seq.end());
                result.insert(std::move(full));
            }
        }
    }
    return memo.emplace(tau, std::move(result)).first->second;
}

} // namespace

std::set<std::vector<event_idx>> enumerate_to_sequences(const plant& p, const si_state& tau,
                                                        int component_cap) {
    for (size_t i = 0; i < tau.seqs.size(); ++i)
        if (static_cast<int>(tau.seqs[i].size()) > component_cap)
            throw resource_error("component " + std::to_string(i + 1) + " length " +
                                 std::to_string(tau.seqs[i].size()) +
                                 " exceeds enumeration cap " + std::to_string(component_cap));
    std::map<si_state, std::set<std::vector<event_idx>>> memo;
    return to_sequences_rec(p, tau, memo);
}

} // namespace detsynth
