#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "detsynth/sim.hpp"
#include "fixtures.hpp"

using namespace detsynth;

namespace {

plant shared_pair_plant() {
    // a and c visible to both sites, b to site 2 only
    return plant::make({"s0"}, {"s0"}, 2, {{"a", {1, 2}}, {"b", {2}}, {"c", {1, 2}}}, {});
}

plant half_shared_plant() {
    // only c is jointly observed
    return plant::make({"s0"}, {"s0"}, 2, {{"a", {1}}, {"b", {2}}, {"c", {1, 2}}}, {});
}

} // namespace

TEST_CASE("si-state ingestion validates alphabets and caps") {
    plant p = fixtures::f1();
    CHECK_THROWS_WITH_AS(static_cast<void>(make_si_state(p, {{"a"}, {"a"}})),
                         doctest::Contains("site 2"), validation_error);
    CHECK_THROWS_AS(static_cast<void>(make_si_state(p, {{"a"}, {"b"}, {}})), validation_error);
    CHECK_THROWS_AS(static_cast<void>(make_si_state(p, {{"a", "a", "a"}, {}}, 2)),
                    resource_error);
    si_state tau = make_si_state(p, {{"a"}, {"b"}});
    CHECK(tau.total_length() == 2);
    CHECK_FALSE(tau.empty());
    CHECK(empty_si_state(p).empty());
}

TEST_CASE("release removes a head from every observing site") {
    plant p = fixtures::f1();
    si_state tau = fixtures::si(p, {{"a"}, {"b"}});
    auto ra = sbuilder_release(p, tau, p.require_event("a"));
    REQUIRE(ra);
    CHECK(ra->seqs[0].empty());
    CHECK(ra->seqs[1] == fixtures::events(p, {"b"}));
    auto rb = sbuilder_release(p, tau, p.require_event("b"));
    REQUIRE(rb);
    CHECK(rb->seqs[0] == fixtures::events(p, {"a"}));
    CHECK(rb->seqs[1].empty());
    CHECK_THROWS_AS(static_cast<void>(sbuilder_release(p, tau, p.require_event("u"))),
                    validation_error);
}

TEST_CASE("release of a shared event needs the head on every observer") {
    plant p = shared_pair_plant();
    si_state tau = make_si_state(p, {{"c", "a"}, {"a", "c"}});
    CHECK_FALSE(sbuilder_release(p, tau, p.require_event("a"))); // not the head at site 1
    CHECK_FALSE(sbuilder_release(p, tau, p.require_event("c"))); // not the head at site 2
}

TEST_CASE("release shrinks by exactly the number of observing sites") {
    gen_config cfg;
    for (uint64_t i = 0; i < 40; ++i) {
        rng_t rng = scenario_rng(7400, i);
        plant p = random_plant(rng, cfg);
        si_state tau = random_si_state(rng, p, cfg);
        for (event_idx e : releasable_heads(p, tau)) {
            auto next = sbuilder_release(p, tau, e);
            REQUIRE(next);
            CHECK(next->total_length() ==
                  tau.total_length() - static_cast<int>(p.observers(e).size()));
        }
    }
}

TEST_CASE("total order enumeration, base and interleaving") {
    plant p = fixtures::f1();
    CHECK(enumerate_to_sequences(p, empty_si_state(p)) ==
          std::set<std::vector<event_idx>>{{}});
    auto tos = enumerate_to_sequences(p, fixtures::si(p, {{"a"}, {"b"}}));
    CHECK(tos == std::set<std::vector<event_idx>>{fixtures::events(p, {"a", "b"}),
                                                  fixtures::events(p, {"b", "a"})});
}

TEST_CASE("shared events force a joint release order") {
    plant p = half_shared_plant();
    auto tos = enumerate_to_sequences(p, make_si_state(p, {{"a", "c"}, {"c"}}));
    CHECK(tos == std::set<std::vector<event_idx>>{fixtures::events(p, {"a", "c"})});
    CHECK_THROWS_AS(
        static_cast<void>(enumerate_to_sequences(p, make_si_state(p, {{"a", "c"}, {"c"}}), 1)),
        resource_error);
    // heads disagree on the shared event: no consistent total order
    plant sp = shared_pair_plant();
    CHECK(enumerate_to_sequences(sp, make_si_state(sp, {{"a", "c"}, {"c", "a"}})).empty());
}

TEST_CASE("enumeration matches brute force over all short sequences") {
    gen_config cfg;
    cfg.max_component_length = 2;
    for (uint64_t i = 0; i < 30; ++i) {
        rng_t rng = scenario_rng(7500, i);
        plant p = random_plant(rng, cfg);
        si_state tau = random_si_state(rng, p, cfg);
        if (tau.total_length() > 6) continue;
        auto tos = enumerate_to_sequences(p, tau);
        for (const auto& seq : tos)
            for (int site = 1; site <= p.num_sites(); ++site)
                CHECK(p.project(std::span<const event_idx>(seq), site) ==
                      tau.seqs[site - 1]);
        // exhaustive cross-check: every sequence over the union alphabet with
        // matching projections must be enumerated
        std::set<std::vector<event_idx>> brute;
        std::vector<event_idx> cur;
        auto rec = [&](auto&& self, size_t len) -> void {
            bool match = true;
            for (int site = 1; site <= p.num_sites() && match; ++site)
                match = p.project(std::span<const event_idx>(cur), site) == tau.seqs[site - 1];
            if (match) brute.insert(cur);
            if (len == static_cast<size_t>(tau.total_length())) return;
            for (event_idx e : p.observable_events()) {
                cur.push_back(e);
                self(self, len + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        CHECK(tos == brute);
    }
}
