#include "detsynth/io.hpp"

#include <algorithm>
#include <fstream>

namespace detsynth::io {

namespace {

void expect(bool ok, const std::string& path, const std::string& what) {
    if (!ok) throw validation_error(path + ": " + what);
}

void check_version(const json& j, const std::string& path) {
    expect(j.contains("format_version"), path, "missing format_version");
    expect(j["format_version"].is_number_integer(), path + ".format_version", "must be an integer");
    int v = j["format_version"].get<int>();
    if (v != format_version)
        throw validation_error(path + ".format_version: unsupported version " +
                               std::to_string(v));
}

std::string str_at(const json& j, const std::string& path) {
    expect(j.is_string(), path, "must be a string");
    return j.get<std::string>();
}

int int_at(const json& j, const std::string& path) {
    expect(j.is_number_integer(), path, "must be an integer");
    return j.get<int>();
}

const json& member(const json& j, const char* key, const std::string& path) {
    expect(j.is_object(), path, "must be an object");
    expect(j.contains(key), path, std::string("missing ") + key);
    return j[key];
}

} // namespace

plant parse_plant(const json& j) {
    check_version(j, "$");
    int m = int_at(member(j, "num_sites", "$"), "$.num_sites");

    std::vector<std::string> states;
    const json& js = member(j, "states", "$");
    expect(js.is_array(), "$.states", "must be an array");
    for (size_t i = 0; i < js.size(); ++i)
        states.push_back(str_at(js[i], "$.states[" + std::to_string(i) + "]"));

    std::vector<std::string> initial;
    const json& ji = member(j, "initial", "$");
    expect(ji.is_array(), "$.initial", "must be an array");
    for (size_t i = 0; i < ji.size(); ++i)
        initial.push_back(str_at(ji[i], "$.initial[" + std::to_string(i) + "]"));

    std::vector<plant_event_decl> events;
    const json& je = member(j, "events", "$");
    expect(je.is_array(), "$.events", "must be an array");
    for (size_t i = 0; i < je.size(); ++i) {
        std::string path = "$.events[" + std::to_string(i) + "]";
        plant_event_decl decl;
        decl.name = str_at(member(je[i], "name", path), path + ".name");
        expect(decl.name != "eps", path + ".name", "'eps' is reserved");
        const json& jo = member(je[i], "observers", path);
        expect(jo.is_array(), path + ".observers", "must be an array");
        for (size_t k = 0; k < jo.size(); ++k)
            decl.observers.push_back(
                int_at(jo[k], path + ".observers[" + std::to_string(k) + "]"));
        events.push_back(std::move(decl));
    }

    std::vector<plant_transition> trans;
    const json& jt = member(j, "transitions", "$");
    expect(jt.is_array(), "$.transitions", "must be an array");
    for (size_t i = 0; i < jt.size(); ++i) {
        std::string path = "$.transitions[" + std::to_string(i) + "]";
        expect(jt[i].is_array() && jt[i].size() == 3, path, "must be [src, event, dst]");
        trans.push_back({str_at(jt[i][0], path + "[0]"), str_at(jt[i][1], path + "[1]"),
                         str_at(jt[i][2], path + "[2]")});
    }
    return plant::make(std::move(states), std::move(initial), m, std::move(events),
                       std::move(trans));
}

json plant_to_json(const plant& p) {
    json j;
    j["format_version"] = format_version;
    j["num_sites"] = p.num_sites();
    j["states"] = json::array();
    for (int q = 0; q < p.num_states(); ++q) j["states"].push_back(p.state_name(q));
    j["initial"] = json::array();
    for (state_idx q : p.initial()) j["initial"].push_back(p.state_name(q));
    j["events"] = json::array();
    for (int e = 0; e < p.num_events(); ++e)
        j["events"].push_back({{"name", p.event_name(e)}, {"observers", p.observers(e)}});
    j["transitions"] = json::array();
    for (const auto& [q, e, dst] : p.transitions())
        j["transitions"].push_back({p.state_name(q), p.event_name(e), p.state_name(dst)});
    return j;
}

namespace {

std::pair<std::vector<std::string>, std::vector<erm_entry>> parse_erm_body(const json& j,
                                                                           const std::string& path) {
    std::vector<std::string> alphabet;
    const json& ja = member(j, "alphabet", path);
    expect(ja.is_array(), path + ".alphabet", "must be an array");
    for (size_t i = 0; i < ja.size(); ++i)
        alphabet.push_back(str_at(ja[i], path + ".alphabet[" + std::to_string(i) + "]"));

    std::vector<erm_entry> entries;
    const json& je = member(j, "entries", path);
    expect(je.is_array(), path + ".entries", "must be an array");
    for (size_t i = 0; i < je.size(); ++i) {
        std::string epath = path + ".entries[" + std::to_string(i) + "]";
        erm_entry e;
        e.from = str_at(member(je[i], "from", epath), epath + ".from");
        e.to = str_at(member(je[i], "to", epath), epath + ".to");
        e.cost = int_at(member(je[i], "cost", epath), epath + ".cost");
        entries.push_back(std::move(e));
    }
    return {std::move(alphabet), std::move(entries)};
}

json erm_body_to_json(const erm& table) {
    json j;
    j["alphabet"] = table.alphabet();
    j["entries"] = json::array();
    // omitted pairs are infinite and the omitted diagonal is zero
    for (sym a = eps_sym; a < table.size(); ++a)
        for (sym b = eps_sym; b < table.size(); ++b) {
            if (a == b) continue;
            auto c = table.cost(a, b);
            if (!c) continue;
            j["entries"].push_back(
                {{"from", table.sym_name(a)}, {"to", table.sym_name(b)}, {"cost", *c}});
        }
    return j;
}

} // namespace

erm parse_erm(const json& j) {
    check_version(j, "$");
    int bound = int_at(member(j, "cost_bound", "$"), "$.cost_bound");
    auto [alphabet, entries] = parse_erm_body(j, "$");
    return erm(std::move(alphabet), bound, std::move(entries));
}

json erm_to_json(const erm& table) {
    json j = erm_body_to_json(table);
    j["format_version"] = format_version;
    j["cost_bound"] = table.cost_bound();
    return j;
}

local_erm_set parse_local_erms(const json& j) {
    check_version(j, "$");
    local_erm_set set;
    set.cost_bound = int_at(member(j, "cost_bound", "$"), "$.cost_bound");
    const json& js = member(j, "sites", "$");
    expect(js.is_array(), "$.sites", "must be an array");
    std::vector<std::pair<int, json>> sites;
    for (size_t i = 0; i < js.size(); ++i) {
        std::string path = "$.sites[" + std::to_string(i) + "]";
        int site = int_at(member(js[i], "site", path), path + ".site");
        expect(site >= 1, path + ".site", "must be >= 1");
        sites.emplace_back(site, js[i]);
    }
    std::sort(sites.begin(), sites.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 0; i < sites.size(); ++i) {
        expect(sites[i].first == static_cast<int>(i) + 1, "$.sites",
               "site indices must cover 1..m exactly once");
        auto [alphabet, entries] = parse_erm_body(sites[i].second, "$.sites[" +
                                                                       std::to_string(i) + "]");
        set.per_site.emplace_back(std::move(alphabet), set.cost_bound, std::move(entries));
    }
    return set;
}

json local_erms_to_json(const local_erm_set& tables) {
    json j;
    j["format_version"] = format_version;
    j["cost_bound"] = tables.cost_bound;
    j["sites"] = json::array();
    for (size_t i = 0; i < tables.per_site.size(); ++i) {
        json site = erm_body_to_json(tables.per_site[i]);
        site["site"] = static_cast<int>(i) + 1;
        j["sites"].push_back(std::move(site));
    }
    return j;
}

si_state parse_si_state(const json& j, const plant& p, int component_cap) {
    check_version(j, "$");
    const json& js = member(j, "sequences", "$");
    expect(js.is_array(), "$.sequences", "must be an array");
    std::vector<std::vector<std::string>> seqs;
    for (size_t i = 0; i < js.size(); ++i) {
        std::string path = "$.sequences[" + std::to_string(i) + "]";
        expect(js[i].is_array(), path, "must be an array");
        std::vector<std::string> seq;
        for (size_t k = 0; k < js[i].size(); ++k)
            seq.push_back(str_at(js[i][k], path + "[" + std::to_string(k) + "]"));
        seqs.push_back(std::move(seq));
    }
    return make_si_state(p, seqs, component_cap);
}

json si_state_to_json(const plant& p, const si_state& tau) {
    json j;
    j["format_version"] = format_version;
    j["sequences"] = json::array();
    for (const auto& comp : tau.seqs) {
        json seq = json::array();
        for (event_idx e : comp) seq.push_back(p.event_name(e));
        j["sequences"].push_back(std::move(seq));
    }
    return j;
}

estimate_set parse_estimates(const json& j, const plant& p) {
    check_version(j, "$");
    const json& je = member(j, "estimates", "$");
    expect(je.is_array(), "$.estimates", "must be an array");
    estimate_set est;
    for (size_t i = 0; i < je.size(); ++i) {
        std::string path = "$.estimates[" + std::to_string(i) + "]";
        state_idx q = p.require_state(str_at(member(je[i], "state", path), path + ".state"));
        int cost = int_at(member(je[i], "cost", path), path + ".cost");
        expect(cost >= 0, path + ".cost", "must be >= 0");
        est.emplace_back(q, cost);
    }
    return normalize_estimates(std::move(est));
}

json estimates_to_json(const plant& p, const estimate_set& est) {
    json j;
    j["format_version"] = format_version;
    j["estimates"] = json::array();
    for (const auto& [q, c] : est)
        j["estimates"].push_back({{"state", p.state_name(q)}, {"cost", c}});
    return j;
}

namespace {

json label_to_json(const plant& p, const synchronizer& s, const sync_label& label) {
    auto name = [&](int e) { return e == label_eps ? std::string("eps") : p.event_name(e); };
    json j;
    switch (s.kind) {
        case sync_kind::plain:
        case sync_kind::eg:
            j["event"] = name(label.received[0]);
            break;
        case sync_kind::el: {
            json t = json::array();
            for (int e : label.received) t.push_back(name(e));
            j["tuple"] = std::move(t);
            break;
        }
        case sync_kind::egt:
            j["original"] = name(label.original);
            j["received"] = name(label.received[0]);
            break;
        case sync_kind::elt: {
            j["original"] = name(label.original);
            json t = json::array();
            for (int e : label.received) t.push_back(name(e));
            j["received"] = std::move(t);
            break;
        }
    }
    return j;
}

bool costed_kind(sync_kind k) {
    return k == sync_kind::egt || k == sync_kind::elt;
}

bool pair_cost_kind(sync_kind k) {
    return k == sync_kind::eg || k == sync_kind::el;
}

} // namespace

json sync_to_json(const plant& p, const synchronizer& s) {
    json j;
    j["format_version"] = format_version;
    j["kind"] = to_string(s.kind);
    j["num_sites"] = s.num_sites;
    j["root"] = s.root;
    j["nodes"] = json::array();
    for (size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& n = s.nodes[i];
        json node;
        node["id"] = static_cast<int>(i);
        json tau = json::array();
        for (const auto& comp : n.tau.seqs) {
            json seq = json::array();
            for (event_idx e : comp) seq.push_back(p.event_name(e));
            tau.push_back(std::move(seq));
        }
        node["tau"] = std::move(tau);
        if (costed_kind(s.kind)) node["cost"] = n.cost;
        node["ending"] = n.ending;
        if (!s.decoded.empty()) {
            json est = json::array();
            for (const auto& [q, c] : s.decoded[i]) {
                json entry;
                entry["state"] = p.state_name(q);
                if (pair_cost_kind(s.kind)) entry["cost"] = c;
                est.push_back(std::move(entry));
            }
            node["estimate"] = std::move(est);
        }
        j["nodes"].push_back(std::move(node));
    }
    j["edges"] = json::array();
    for (const auto& e : s.edges) {
        json edge;
        edge["src"] = e.src;
        edge["dst"] = e.dst;
        edge["label"] = label_to_json(p, s, e.label);
        edge["error"] = e.error;
        j["edges"].push_back(std::move(edge));
    }
    return j;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r;
}

std::string label_text(const plant& p, const synchronizer& s, const sync_label& label) {
    auto name = [&](int e) { return e == label_eps ? std::string("eps") : p.event_name(e); };
    switch (s.kind) {
        case sync_kind::plain:
        case sync_kind::eg:
            return name(label.received[0]);
        case sync_kind::el: {
            std::string r = "(";
            for (size_t i = 0; i < label.received.size(); ++i) {
                if (i) r += ",";
                r += name(label.received[i]);
            }
            return r + ")";
        }
        case sync_kind::egt:
            return "(" + name(label.original) + "," + name(label.received[0]) + ")";
        case sync_kind::elt: {
            std::string r = "(" + name(label.original) + "|";
            for (size_t i = 0; i < label.received.size(); ++i) {
                if (i) r += ",";
                r += name(label.received[i]);
            }
            return r + ")";
        }
    }
    return "?";
}

std::string estimate_text(const plant& p, const synchronizer& s, size_t node) {
    if (s.decoded.empty()) return "";
    std::string r = "{";
    bool first = true;
    for (const auto& [q, c] : s.decoded[node]) {
        if (!first) r += ", ";
        first = false;
        if (pair_cost_kind(s.kind))
            r += "(" + p.state_name(q) + "," + std::to_string(c) + ")";
        else
            r += p.state_name(q);
    }
    return r + "}";
}

} // namespace

std::string sync_to_dot(const plant& p, const synchronizer& s) {
    std::string out = "digraph synchronizer {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& n = s.nodes[i];
        std::string title = to_string(p, n.tau);
        if (costed_kind(s.kind)) title += " c=" + std::to_string(n.cost);
        std::string label = dot_escape(title);
        std::string est = estimate_text(p, s, i);
        if (!est.empty()) label += "\\n" + dot_escape(est); // literal \n line break
        out += "  n" + std::to_string(i) + " [label=\"" + label + "\"";
        if (n.ending) out += ", peripheries=2";
        if (static_cast<int>(i) == s.root) out += ", penwidth=2";
        out += "];\n";
    }
    for (const auto& e : s.edges) {
        out += "  n" + std::to_string(e.src) + " -> n" + std::to_string(e.dst) + " [label=\"" +
               dot_escape(label_text(p, s, e.label)) + "\"";
        if (e.error) out += ", style=dashed";
        out += "];\n";
    }
    out += "}\n";
    return out;
}

namespace {

json product_to_json(const plant& product,
                     const std::set<std::tuple<state_idx, event_idx, state_idx>>& errors) {
    json j = plant_to_json(product);
    json flagged = json::array();
    for (const auto& [q, e, dst] : product.transitions())
        flagged.push_back(errors.count({q, e, dst}) > 0);
    j["error_transitions"] = std::move(flagged);
    return j;
}

std::string product_to_dot(const plant& product,
                           const std::set<std::tuple<state_idx, event_idx, state_idx>>& errors) {
    std::string out = "digraph modified {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (int q = 0; q < product.num_states(); ++q) {
        out += "  n" + std::to_string(q) + " [label=\"" + dot_escape(product.state_name(q)) +
               "\"";
        if (contains(product.initial(), q)) out += ", penwidth=2";
        out += "];\n";
    }
    for (const auto& [q, e, dst] : product.transitions()) {
        out += "  n" + std::to_string(q) + " -> n" + std::to_string(dst) + " [label=\"" +
               dot_escape(product.event_name(e)) + "\"";
        if (errors.count({q, e, dst})) out += ", style=dashed";
        out += "];\n";
    }
    out += "}\n";
    return out;
}

} // namespace

json modified_to_json(const modified_plant& m) {
    return product_to_json(m.product, m.error_edges);
}
std::string modified_to_dot(const modified_plant& m) {
    return product_to_dot(m.product, m.error_edges);
}
json local_modified_to_json(const local_modified& m) {
    return product_to_json(m.product, m.error_edges);
}
std::string local_modified_to_dot(const local_modified& m) {
    return product_to_dot(m.product, m.error_edges);
}

json report_to_json(const containment_report& report) {
    json j;
    j["format_version"] = format_version;
    j["mode"] = report.mode == sim_mode::global ? "global" : "local";
    j["seed"] = report.seed;
    j["count"] = report.outcomes.size();
    j["all_contained"] = report.all_ok;
    j["scenarios"] = json::array();
    for (const auto& o : report.outcomes) {
        json s;
        s["index"] = o.index;
        s["contained"] = o.ok;
        s["true_state"] = o.true_state;
        s["true_cost"] = o.true_cost;
        s["system_estimates"] = o.system_estimates;
        s["builder_estimates"] = o.builder_estimates;
        if (o.repro) {
            json r;
            r["plant"] = plant_to_json(o.repro->model);
            if (o.repro->global_table) r["erm"] = erm_to_json(*o.repro->global_table);
            if (o.repro->local_tables)
                r["local_erms"] = local_erms_to_json(*o.repro->local_tables);
            r["si"] = si_state_to_json(o.repro->model, o.repro->si);
            json run = json::array();
            for (event_idx e : o.repro->run) run.push_back(o.repro->model.event_name(e));
            r["run"] = std::move(run);
            s["repro"] = std::move(r);
        }
        j["scenarios"].push_back(std::move(s));
    }
    return j;
}

file_kind detect_kind(const json& j) {
    if (!j.is_object()) return file_kind::unknown;
    if (j.contains("states")) return file_kind::plant;
    if (j.contains("sites")) return file_kind::local_erms;
    if (j.contains("alphabet")) return file_kind::erm;
    if (j.contains("sequences")) return file_kind::si;
    if (j.contains("estimates")) return file_kind::estimates;
    return file_kind::unknown;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw validation_error(path + ": " + e.what());
    }
    return j;
}

void store_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open '" + path + "' for writing");
    out << text;
}

} // namespace detsynth::io
