#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "detsynth/local.hpp"

namespace detsynth {

// Deterministic stream: one generator per scenario, derived from (seed, index)
// so batches replay identically and scenarios are independent.
using rng_t = std::mt19937_64;
rng_t scenario_rng(uint64_t seed, uint64_t index);
// Platform-stable bounded draw (plain modulo; bias is irrelevant here).
uint64_t pick(rng_t& rng, uint64_t n);
bool chance(rng_t& rng, double p);

struct gen_config {
    int min_states = 2;
    int max_states = 6;
    int max_events = 4;
    int max_sites = 2;
    double unobservable_prob = 0.2;
    double shared_event_prob = 0.3;
    double transition_prob = 0.4;
    double erm_density = 0.3;
    int max_cost_bound = 2;
    int run_length = 4;
    int max_component_length = 3;
};

plant random_plant(rng_t& rng, const gen_config& cfg);
erm random_erm(rng_t& rng, const plant& p, int cost_bound, const gen_config& cfg);
local_erm_set random_local_erms(rng_t& rng, const plant& p, int cost_bound,
                                const gen_config& cfg);
si_state random_si_state(rng_t& rng, const plant& p, const gen_config& cfg);

struct run_sample {
    std::vector<event_idx> run;
    state_idx final_state = 0;
    state_set finals; // delta(q0, run)
    bool truncated = false;
};

// Uniform random walk over enabled transitions; stops early at dead ends.
run_sample sample_run(const plant& p, const state_set& q0, int len, rng_t& rng);

struct tampered {
    si_state si;
    int cost = 0;
    std::vector<event_idx> received; // corrupted observation before projection
};

// Samples an edit script admitted by the table, then projects per site.
tampered tamper_global(const plant& p, const erm& table, std::span<const event_idx> run,
                       rng_t& rng);
// Samples one per-site script under the shared budget.
tampered tamper_local(const plant& p, const local_erm_set& tables,
                      std::span<const event_idx> run, rng_t& rng);

enum class sim_mode { global, local };

struct scenario_repro {
    plant model;
    std::optional<erm> global_table;
    std::optional<local_erm_set> local_tables;
    si_state si;
    std::vector<event_idx> run;
};

struct scenario_outcome {
    uint64_t index = 0;
    bool ok = false;
    std::string true_state;
    int true_cost = 0;
    size_t system_estimates = 0;
    size_t builder_estimates = 0;
    std::optional<scenario_repro> repro; // populated for failures
};

struct containment_report {
    sim_mode mode = sim_mode::global;
    uint64_t seed = 0;
    std::vector<scenario_outcome> outcomes;
    bool all_ok = true;
};

// Injects n tampering scenarios and checks that the true (state, cost) pair
// is contained in the output of both estimation methods.
containment_report containment_batch(sim_mode mode, int n, uint64_t seed,
                                     const gen_config& cfg);

} // namespace detsynth
