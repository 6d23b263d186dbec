#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "detsynth/io.hpp"
#include "detsynth/sim.hpp"
#include "fixtures.hpp"

using namespace detsynth;

TEST_CASE("sampled runs replay deterministically") {
    plant p = fixtures::f1();
    rng_t r1 = scenario_rng(42, 0);
    rng_t r2 = scenario_rng(42, 0);
    run_sample a = sample_run(p, p.initial(), 3, r1);
    run_sample b = sample_run(p, p.initial(), 3, r2);
    CHECK(a.run == b.run);
    CHECK(a.final_state == b.final_state);

    rng_t r3 = scenario_rng(42, 1);
    run_sample c = sample_run(p, p.initial(), 0, r3);
    CHECK(c.run.empty());
    CHECK(c.finals == p.initial());
}

TEST_CASE("sampled runs follow enabled transitions only") {
    gen_config cfg;
    for (uint64_t i = 0; i < 30; ++i) {
        rng_t rng = scenario_rng(9700, i);
        plant p = random_plant(rng, cfg);
        run_sample s = sample_run(p, p.initial(), 5, rng);
        state_set states = p.initial();
        for (event_idx e : s.run) {
            state_set next;
            for (state_idx q : states)
                for (state_idx dst : p.targets(q, e)) next.push_back(dst);
            states = normalize(std::move(next));
            CHECK_FALSE(states.empty());
        }
        CHECK(contains(s.finals, s.final_state));
        if (!s.truncated) CHECK(static_cast<int>(s.run.size()) == 5);
    }
}

TEST_CASE("global tampering stays inside the admitted erroneous set") {
    plant p = fixtures::f1();
    erm t = fixtures::e2();
    erm id = fixtures::identity_global(p, 0);
    erm_binding bind = bind_global(t, p);
    for (uint64_t i = 0; i < 50; ++i) {
        rng_t rng = scenario_rng(9800, i);
        run_sample run = sample_run(p, p.initial(), 4, rng);
        tampered out = tamper_global(p, t, run.run, rng);
        auto omega = p.project_observable(run.run);
        CHECK(out.cost <= t.cost_bound());
        CHECK(tamper_costs(t, bind.to_syms(omega), bind.to_syms(out.received)).test(out.cost));
        for (int site = 1; site <= p.num_sites(); ++site)
            CHECK(out.si.seqs[site - 1] ==
                  p.project(std::span<const event_idx>(out.received), site));

        // an identity table admits only the error-less script
        rng_t rng2 = scenario_rng(9800, i);
        run_sample run2 = sample_run(p, p.initial(), 4, rng2);
        tampered clean = tamper_global(p, id, run2.run, rng2);
        CHECK(clean.cost == 0);
        CHECK(clean.received == p.project_observable(run2.run));
    }
}

TEST_CASE("local tampering respects the shared budget") {
    plant p = fixtures::f1();
    local_erm_set tables = fixtures::l1l2();
    auto binds = bind_local(tables, p);
    for (uint64_t i = 0; i < 50; ++i) {
        rng_t rng = scenario_rng(9900, i);
        run_sample run = sample_run(p, p.initial(), 4, rng);
        tampered out = tamper_local(p, tables, run.run, rng);
        CHECK(out.cost <= tables.cost_bound);
        // the total decomposes into per-site achievable costs
        std::vector<std::vector<int>> site_costs;
        for (int site = 1; site <= p.num_sites(); ++site) {
            auto pi = p.project(std::span<const event_idx>(run.run), site);
            site_costs.push_back(tamper_costs(tables.per_site[site - 1],
                                              binds[site - 1].to_syms(pi),
                                              binds[site - 1].to_syms(out.si.seqs[site - 1]))
                                     .values());
        }
        bool decomposable = false;
        for (int c1 : site_costs[0])
            for (int c2 : site_costs[1])
                if (c1 + c2 == out.cost) decomposable = true;
        CHECK(decomposable);
    }
}

TEST_CASE("identity batches are contained at zero cost") {
    gen_config cfg;
    cfg.erm_density = 0.0; // tables degenerate to identity
    cfg.max_cost_bound = 0;
    containment_report report = containment_batch(sim_mode::global, 100, 2024, cfg);
    CHECK(report.all_ok);
    for (const auto& o : report.outcomes) {
        CHECK(o.ok);
        CHECK(o.true_cost == 0);
    }
    containment_report local_report = containment_batch(sim_mode::local, 100, 2024, cfg);
    CHECK(local_report.all_ok);
}

TEST_CASE("random batches are fully contained in both modes") {
    gen_config cfg;
    containment_report g = containment_batch(sim_mode::global, 100, 7, cfg);
    CHECK(g.all_ok);
    containment_report l = containment_batch(sim_mode::local, 100, 7, cfg);
    CHECK(l.all_ok);
}

TEST_CASE("reports replay byte-identically from the seed") {
    gen_config cfg;
    containment_report a = containment_batch(sim_mode::global, 25, 99, cfg);
    containment_report b = containment_batch(sim_mode::global, 25, 99, cfg);
    CHECK(io::report_to_json(a).dump() == io::report_to_json(b).dump());
}
