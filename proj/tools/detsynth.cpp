// Command-line front end: validation, estimation, oracle runs, fault
// injection, DOT/JSON export, and chained synchronizations.

#include <iostream>
#include <optional>
#include <variant>

#include <CLI11.hpp>

#include "detsynth/io.hpp"

namespace {

using namespace detsynth;
using detsynth::io::json;

constexpr int exit_ok = 0;
constexpr int exit_empty = 1;
constexpr int exit_validation = 2;
constexpr int exit_resource = 3;
constexpr int exit_invariant = 4;

struct estimation_inputs {
    plant model;
    std::variant<erm, local_erm_set> tables;
    state_set init;

    bool global() const { return std::holds_alternative<erm>(tables); }
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

estimation_inputs load_inputs(const std::string& plant_path, const std::string& erm_path,
                              const std::string& mode, const std::string& init_csv) {
    estimation_inputs in{io::parse_plant(io::load_json(plant_path)), erm({}, 0, {}), {}};
    json jerm = io::load_json(erm_path);
    auto kind = io::detect_kind(jerm);
    if (mode == "global") {
        if (kind != io::file_kind::erm)
            throw validation_error(erm_path + ": global mode expects an ERM file");
        erm table = io::parse_erm(jerm);
        table.ensure_valid();
        bind_global(table, in.model); // alphabet alignment check
        in.tables = std::move(table);
    } else {
        if (kind != io::file_kind::local_erms)
            throw validation_error(erm_path + ": local mode expects a local ERM set file");
        local_erm_set tables = io::parse_local_erms(jerm);
        tables.ensure_valid();
        bind_local(tables, in.model);
        in.tables = std::move(tables);
    }
    if (init_csv.empty()) {
        in.init = in.model.initial();
    } else {
        for (const auto& name : split_csv(init_csv))
            in.init.push_back(in.model.require_state(name));
        in.init = normalize(std::move(in.init));
    }
    return in;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        io::store_text(out_path, text);
}

void emit_json(const std::string& out_path, const json& j) {
    emit(out_path, j.dump(2) + "\n");
}

int run_validate(const std::vector<std::string>& files) {
    bool ok = true;
    for (const auto& path : files) {
        try {
            json j = io::load_json(path);
            switch (io::detect_kind(j)) {
                case io::file_kind::plant:
                    io::parse_plant(j);
                    std::cout << path << ": ok (plant)\n";
                    break;
                case io::file_kind::erm: {
                    erm table = io::parse_erm(j);
                    auto diags = table.validate();
                    if (!diags.empty()) throw validation_error(diags.front());
                    std::cout << path << ": ok (erm)\n";
                    break;
                }
                case io::file_kind::local_erms: {
                    local_erm_set tables = io::parse_local_erms(j);
                    auto diags = tables.validate();
                    if (!diags.empty()) throw validation_error(diags.front());
                    std::cout << path << ": ok (local erm set)\n";
                    break;
                }
                case io::file_kind::si:
                    // site alphabets can only be checked against a plant
                    std::cout << path << ": ok (si-state, schema only)\n";
                    break;
                case io::file_kind::estimates:
                    std::cout << path << ": ok (estimates, schema only)\n";
                    break;
                default:
                    throw validation_error("unrecognized document");
            }
        } catch (const validation_error& e) {
            std::cerr << path << ": " << e.what() << "\n";
            ok = false;
        }
    }
    return ok ? exit_ok : exit_validation;
}

estimate_set run_estimate(const estimation_inputs& in, const si_state& tau,
                          const std::string& method) {
    if (in.global()) {
        const erm& table = std::get<erm>(in.tables);
        return method == "system" ? estimate_global_system(in.model, table, tau, in.init)
                                  : estimate_global_builder(in.model, table, tau, in.init);
    }
    const local_erm_set& tables = std::get<local_erm_set>(in.tables);
    return method == "system" ? estimate_local_system(in.model, tables, tau, in.init)
                              : estimate_local_builder(in.model, tables, tau, in.init);
}

gen_config parse_gen_config(const std::string& path) {
    gen_config cfg;
    if (path.empty()) return cfg;
    json j = io::load_json(path);
    auto get_int = [&](const char* key, int& slot) {
        if (j.contains(key)) slot = j[key].get<int>();
    };
    auto get_double = [&](const char* key, double& slot) {
        if (j.contains(key)) slot = j[key].get<double>();
    };
    get_int("min_states", cfg.min_states);
    get_int("max_states", cfg.max_states);
    get_int("max_events", cfg.max_events);
    get_int("max_sites", cfg.max_sites);
    get_double("unobservable_prob", cfg.unobservable_prob);
    get_double("shared_event_prob", cfg.shared_event_prob);
    get_double("transition_prob", cfg.transition_prob);
    get_double("erm_density", cfg.erm_density);
    get_int("max_cost_bound", cfg.max_cost_bound);
    get_int("run_length", cfg.run_length);
    get_int("max_component_length", cfg.max_component_length);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Error-tolerant decentralized state estimation for discrete event systems"};
    app.require_subcommand(1);

    // validate
    auto* validate = app.add_subcommand("validate", "Validate input files");
    std::vector<std::string> validate_files;
    validate->add_option("files", validate_files, "Files to validate")->required();

    // shared estimation options
    std::string plant_path, erm_path, si_path, init_csv, out_path;
    std::string mode = "global", method = "system";
    bool least_cost = false;

    auto add_model_opts = [&](CLI::App* cmd, bool with_si) {
        cmd->add_option("--plant", plant_path, "Plant file")
            ->required()
            ->envname("DETSYNTH_PLANT");
        cmd->add_option("--erm", erm_path, "ERM file (global) or local ERM set file")
            ->required()
            ->envname("DETSYNTH_ERM");
        if (with_si)
            cmd->add_option("--si", si_path, "SI-state file")->required()->envname("DETSYNTH_SI");
        cmd->add_option("--init", init_csv, "Initial states, comma-separated (default: plant)")
            ->envname("DETSYNTH_INIT");
        cmd->add_option("--mode", mode, "global or local")
            ->check(CLI::IsMember({"global", "local"}))
            ->envname("DETSYNTH_MODE");
        cmd->add_option("--out", out_path, "Output file (default: stdout)")
            ->envname("DETSYNTH_OUT");
    };

    auto* estimate = app.add_subcommand("estimate", "Error-tolerant state estimation");
    add_model_opts(estimate, true);
    estimate->add_option("--method", method, "system or builder")
        ->check(CLI::IsMember({"system", "builder"}))
        ->envname("DETSYNTH_METHOD");
    estimate->add_flag("--least-cost", least_cost, "Keep only least-cost pairs per state");

    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force reference estimation");
    add_model_opts(oracle_cmd, true);
    oracle_cmd->add_flag("--least-cost", least_cost, "Keep only least-cost pairs per state");
    oracle_caps caps;
    int caps_all = -1;
    oracle_cmd->add_option("--caps", caps_all,
                           "Single cap for observation length, component length and budget");
    oracle_cmd->add_option("--caps-run", caps.max_run_length, "Max observation length");
    oracle_cmd->add_option("--caps-component", caps.max_component_length,
                           "Max component length");
    oracle_cmd->add_option("--caps-cost", caps.max_cost, "Max admissible budget");
    oracle_cmd->add_option("--caps-nodes", caps.max_nodes, "Max visited prefixes");

    auto* simulate = app.add_subcommand("simulate", "Seeded tampering scenarios");
    int sim_count = 100;
    uint64_t sim_seed = 1;
    std::string gen_config_path;
    simulate->add_option("--mode", mode, "global or local")
        ->check(CLI::IsMember({"global", "local"}))
        ->envname("DETSYNTH_MODE");
    simulate->add_option("--count", sim_count, "Number of scenarios")->required();
    simulate->add_option("--seed", sim_seed, "Base seed")->envname("DETSYNTH_SEED");
    simulate->add_option("--gen-config", gen_config_path, "Generator config file")
        ->envname("DETSYNTH_GEN_CONFIG");
    simulate->add_option("--out", out_path, "Output file (default: stdout)")
        ->envname("DETSYNTH_OUT");

    auto* export_cmd = app.add_subcommand("export", "Export structures as DOT or JSON");
    std::string what = "sync", format = "dot";
    add_model_opts(export_cmd, false);
    export_cmd->add_option("--si", si_path, "SI-state file (required for --what sync)")
        ->envname("DETSYNTH_SI");
    export_cmd->add_option("--what", what, "gg, gl, or sync")
        ->check(CLI::IsMember({"gg", "gl", "sync"}));
    export_cmd->add_option("--format", format, "dot or json")
        ->check(CLI::IsMember({"dot", "json"}));
    export_cmd->add_option("--method", method, "system or builder (for --what sync)")
        ->check(CLI::IsMember({"system", "builder"}));

    auto* chain = app.add_subcommand("chain", "Sequential synchronizations");
    std::string steps_path;
    add_model_opts(chain, false);
    chain->add_option("--steps", steps_path, "Steps file")->required();
    chain->add_option("--method", method, "system or builder")
        ->check(CLI::IsMember({"system", "builder"}));
    chain->add_flag("--least-cost", least_cost, "Keep only least-cost pairs per state");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return run_validate(validate_files);

        if (estimate->parsed() || oracle_cmd->parsed()) {
            estimation_inputs in = load_inputs(plant_path, erm_path, mode, init_csv);
            si_state tau = io::parse_si_state(io::load_json(si_path), in.model);
            if (caps_all >= 0) {
                caps.max_run_length = caps_all;
                caps.max_component_length = caps_all;
                caps.max_cost = caps_all;
            }
            estimate_set est;
            if (estimate->parsed()) {
                est = run_estimate(in, tau, method);
            } else if (in.global()) {
                est = oracle_global(in.model, std::get<erm>(in.tables), tau, in.init, caps);
            } else {
                est = oracle_local(in.model, std::get<local_erm_set>(in.tables), tau, in.init,
                                   caps);
            }
            if (least_cost) est = least_cost_filter(est);
            emit_json(out_path, io::estimates_to_json(in.model, est));
            return est.empty() ? exit_empty : exit_ok;
        }

        if (simulate->parsed()) {
            gen_config cfg = parse_gen_config(gen_config_path);
            sim_mode m = mode == "global" ? sim_mode::global : sim_mode::local;
            containment_report report = containment_batch(m, sim_count, sim_seed, cfg);
            emit_json(out_path, io::report_to_json(report));
            return report.all_ok ? exit_ok : exit_empty;
        }

        if (export_cmd->parsed()) {
            estimation_inputs in = load_inputs(plant_path, erm_path, mode, init_csv);
            std::string text;
            if (what == "gg") {
                if (!in.global()) throw validation_error("--what gg needs a global ERM");
                modified_plant m = build_gg(in.model, std::get<erm>(in.tables));
                text = format == "dot" ? io::modified_to_dot(m)
                                       : io::modified_to_json(m).dump(2) + "\n";
            } else if (what == "gl") {
                if (in.global()) throw validation_error("--what gl needs a local ERM set");
                auto obs = build_go(in.model);
                local_modified m = build_gl(in.model, obs, std::get<local_erm_set>(in.tables));
                text = format == "dot" ? io::local_modified_to_dot(m)
                                       : io::local_modified_to_json(m).dump(2) + "\n";
            } else {
                if (si_path.empty()) throw validation_error("--what sync requires --si");
                si_state tau = io::parse_si_state(io::load_json(si_path), in.model);
                synchronizer s;
                if (in.global()) {
                    const erm& table = std::get<erm>(in.tables);
                    s = method == "system" ? build_eg_synchronizer(in.model, table, tau, in.init)
                                           : build_egt_synchronizer(in.model, table, tau, in.init);
                } else {
                    const local_erm_set& tables = std::get<local_erm_set>(in.tables);
                    s = method == "system"
                            ? build_el_synchronizer(in.model, tables, tau, in.init)
                            : build_elt_synchronizer(in.model, tables, tau, in.init);
                }
                text = format == "dot" ? io::sync_to_dot(in.model, s)
                                       : io::sync_to_json(in.model, s).dump(2) + "\n";
            }
            emit(out_path, text);
            return exit_ok;
        }

        if (chain->parsed()) {
            estimation_inputs in = load_inputs(plant_path, erm_path, mode, init_csv);
            json jsteps = io::load_json(steps_path);
            if (!jsteps.contains("steps") || !jsteps["steps"].is_array())
                throw validation_error(steps_path + ": missing steps array");
            json out;
            out["format_version"] = io::format_version;
            out["steps"] = json::array();
            state_set current = in.init;
            bool empty = false;
            for (const auto& step : jsteps["steps"]) {
                si_state tau = io::parse_si_state(step, in.model);
                estimation_inputs step_in = in;
                step_in.init = current;
                estimate_set est = run_estimate(step_in, tau, method);
                if (least_cost) est = least_cost_filter(est);
                out["steps"].push_back(io::estimates_to_json(in.model, est));
                // next step starts from the estimated states; costs reset and
                // the full budget applies again
                state_set next;
                for (const auto& [q, c] : est) next.push_back(q);
                current = normalize(std::move(next));
                if (current.empty()) {
                    empty = true;
                    break;
                }
            }
            emit_json(out_path, out);
            return empty ? exit_empty : exit_ok;
        }
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return exit_resource;
    } catch (const std::logic_error& e) {
        std::cerr << "internal invariant breach: " << e.what() << "\n";
        return exit_invariant;
    }
    return exit_ok;
}
