#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "detsynth/io.hpp"
#include "detsynth/oracle.hpp"
#include "fixtures.hpp"

// The three-site system here is a best-effort reconstruction of a reference
// example whose full transition relation is not recoverable from its written
// description. Facts the description does pin down are asserted; the
// documented result sets are printed for side-by-side comparison and checked
// only as warnings, never as failures. Cross-method agreement is asserted
// unconditionally: it must hold on any model.

using namespace detsynth;

namespace {

std::string show(const plant& p, const estimate_set& est) {
    std::string r = "{";
    for (size_t i = 0; i < est.size(); ++i) {
        if (i) r += ", ";
        r += "(" + p.state_name(est[i].first) + "," + std::to_string(est[i].second) + ")";
    }
    return r + "}";
}

} // namespace

TEST_CASE("reconstruction satisfies the documented structural facts") {
    plant p = fixtures::ref_plant();
    state_set q0 = fixtures::states(p, {"q0"});
    CHECK(p.unobservable_reach(q0) == fixtures::states(p, {"q0", "q1"}));
    CHECK(p.observable_reach(p.unobservable_reach(q0), p.require_event("alpha12")) ==
          fixtures::states(p, {"q2"}));
    CHECK(p.observable_reach(fixtures::states(p, {"q0", "q1"}),
                             p.require_event("beta13"))
              .empty());
    CHECK(p.unobservable_reach(p.observable_reach(fixtures::states(p, {"q2"}),
                                                  p.require_event("beta13"))) ==
          fixtures::states(p, {"q3"}));

    // the locally modified system reaches (q4, 1) silently from the start
    observation_automaton obs = build_go(p);
    local_modified m = build_gl(p, obs, fixtures::ref_local_erms());
    state_set start = m.product.unobservable_reach(m.encode_initial(q0));
    CHECK(m.decode_set(start) == fixtures::pairs(p, {{"q0", 0}, {"q1", 0}, {"q4", 1}}));

    // in the globally modified system the gamma3 move also carries its
    // received-as-beta13 relabeling at +1, flagged as an error action
    modified_plant mg = build_gg(p, fixtures::ref_erm());
    state_idx q4_0 = mg.encode(p.require_state("q4"), 0);
    state_idx q0_1 = mg.encode(p.require_state("q0"), 1);
    event_idx beta = mg.product.require_event("beta13");
    CHECK(contains(mg.product.targets(q4_0, beta), q0_1));
    CHECK(mg.error_edges.count({q4_0, beta, q0_1}) == 1);
}

TEST_CASE("global estimation on the reconstruction") {
    plant p = fixtures::ref_plant();
    erm t = fixtures::ref_erm();
    si_state tau = fixtures::si(p, {{"alpha12", "beta13", "alpha12", "beta13", "beta13"},
                                    {"alpha12", "sigma2", "alpha12"},
                                    {"beta13", "beta13", "beta13"}});
    state_set q0 = fixtures::states(p, {"q0"});

    estimate_set system = estimate_global_system(p, t, tau, q0);
    estimate_set builder = estimate_global_builder(p, t, tau, q0);
    CHECK(system == builder);

    synchronizer s = build_egt_synchronizer(p, t, tau, q0);
    CHECK(audit_monotonic(s).empty());

    std::cout << "[ref-fixture] global estimate on reconstruction: " << show(p, system)
              << "\n[ref-fixture] documented set (not gating): "
              << "{(q0,2), (q1,2), (q4,0), (q4,2)}\n";
    WARN(system == fixtures::pairs(p, {{"q0", 2}, {"q1", 2}, {"q4", 0}, {"q4", 2}}));
}

TEST_CASE("local estimation on the reconstruction") {
    plant p = fixtures::ref_plant();
    local_erm_set tables = fixtures::ref_local_erms();
    si_state tau =
        fixtures::si(p, {{"alpha12"}, {"sigma2", "alpha12", "sigma2"}, {"gamma3"}});
    state_set q0 = fixtures::states(p, {"q0"});

    estimate_set system = estimate_local_system(p, tables, tau, q0);
    estimate_set builder = estimate_local_builder(p, tables, tau, q0);
    CHECK(system == builder);

    // the zero-cost member is fully determined by the prose: the observation
    // sigma2 gamma3 alpha12 sigma2 ends in q2 with every site exact
    CHECK(std::binary_search(system.begin(), system.end(),
                             estimate_pair{p.require_state("q2"), 0}));

    std::cout << "[ref-fixture] local estimate on reconstruction: " << show(p, system)
              << "\n[ref-fixture] documented set (not gating): "
              << "{(q2,0), (q2,1), (q2,2), (q3,2), (q4,2)}\n";
    WARN(system ==
         fixtures::pairs(p, {{"q2", 0}, {"q2", 1}, {"q2", 2}, {"q3", 2}, {"q4", 2}}));
}

TEST_CASE("least-cost filter of the documented global set") {
    plant p = fixtures::ref_plant();
    estimate_set documented = fixtures::pairs(p, {{"q0", 2}, {"q1", 2}, {"q4", 0}, {"q4", 2}});
    CHECK(least_cost_filter(documented) ==
          fixtures::pairs(p, {{"q0", 2}, {"q1", 2}, {"q4", 0}}));
}
