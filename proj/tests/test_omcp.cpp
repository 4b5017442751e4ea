/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mgrisk/network_io.hpp"
#include "mgrisk/solver.hpp"

using namespace mgrisk;

namespace {

std::vector<char> blocks_on(std::initializer_list<int> ids) {
    std::vector<char> on(6, 0);
    for (int id : ids) on[static_cast<std::size_t>(id - 1)] = 1;
    return on;
}

}  // namespace

TEST_CASE("weighted block values are exact products") {
    const Scenario sc = fixtures::ieee13();
    const std::vector<double> weighted{4.906, 1.665, 0, 4.052, 0.15, 0.6};
    for (std::size_t b = 0; b < 6; ++b) {
        CAPTURE(b);
        const LoadBlock& blk = sc.bg.blocks[b];
        CHECK(block_coefficient(blk, Objective::vulnerability_weighted) == weighted[b]);
        CHECK(block_coefficient(blk, Objective::load_only) == blk.total_pd);
        CHECK(block_coefficient(blk, Objective::vulnerability_only) == blk.total_svi);
    }
}

TEST_CASE("name round trips") {
    for (auto c : {Controllability::no_microgrids, Controllability::static_microgrids,
                   Controllability::expanding_microgrids, Controllability::networking_microgrids})
        CHECK(controllability_from_string(short_name(c)) == c);
    for (auto o : {Objective::load_only, Objective::vulnerability_only, Objective::vulnerability_weighted})
        CHECK(objective_from_string(short_name(o)) == o);
    CHECK_FALSE(objective_from_string("weighted?"));
    CHECK_FALSE(controllability_from_string(""));
}

TEST_CASE("risk of the illustrative configuration") {
    const Scenario sc = fixtures::ieee13();
    const auto on = blocks_on({1, 2, 4, 6});
    std::vector<char> closed{0, 1, 0, 0, 0, 0};
    CHECK(absolute_risk(on, closed, sc.bg, true) == 416.0);
    CHECK(absolute_risk(on, closed, sc.bg, false) == 408.0);
    const OmcpInstance inst = fixtures::instance(sc, Objective::vulnerability_weighted,
                                                 Controllability::networking_microgrids, 0.5);
    CHECK(inst.policy.total == 854.0);
    CHECK(inst.within_budget(416.0));
    CHECK_FALSE(inst.within_budget(428.0));
    // The budget itself is admissible.
    CHECK(inst.within_budget(427.0));
}

TEST_CASE("served totals of the illustrative configuration") {
    const Scenario sc = fixtures::ieee13();
    const auto on = blocks_on({1, 2, 4, 6});
    const ObjectiveReport r = objective_value(on, Objective::vulnerability_weighted, sc.bg);
    // kW and v are integers in the fixture, so sums are exact.
    CHECK(r.load_kw.served == 3851.0);
    CHECK(r.load_kw.total == 3876.0);
    CHECK(r.vulnerability.served == 18.0);
    CHECK(r.vulnerability.total == 26.0);
    CHECK(std::abs(r.weighted_mw.served - 11.223) <= 1e-12);
    CHECK(std::abs(r.weighted_mw.total - 11.373) <= 1e-12);
    CHECK(std::abs(r.shed_cost - 0.15) <= 1e-12);

    const VulnerabilityStats v = vulnerability_stats(on, sc.bg);
    REQUIRE(v.served_mean);
    REQUIRE(v.shed_mean);
    CHECK(*v.served_mean == 4.5);
    CHECK(*v.shed_mean == 4.0);
}

TEST_CASE("vulnerability means are absent for empty sides") {
    const Scenario sc = fixtures::ieee13();
    const VulnerabilityStats all = vulnerability_stats(std::vector<char>(6, 1), sc.bg);
    CHECK(all.served_mean);
    CHECK_FALSE(all.shed_mean);
    const VulnerabilityStats none = vulnerability_stats(std::vector<char>(6, 0), sc.bg);
    CHECK_FALSE(none.served_mean);
    CHECK(none.shed_mean);
}

TEST_CASE("controllability fixes the binary domains") {
    const Scenario sc = fixtures::ieee13();
    const NetworkModel& n = *sc.net;
    auto inst = [&](Controllability c) { return fixtures::instance(sc, Objective::load_only, c, 0.5); };

    const OmcpInstance none = inst(Controllability::no_microgrids);
    // Switches stay free; only the inverters are forced to follow.
    for (Domain d : none.switch_domain) CHECK(d == Domain::free);
    for (std::size_t s = 0; s < n.sources().size(); ++s)
        CHECK(none.inverter_domain[s] ==
              (s == *n.substation_source() ? Domain::fixed_on : Domain::fixed_off));
    CHECK(none.free_binaries() == 6);

    const OmcpInstance stat = inst(Controllability::static_microgrids);
    for (Domain d : stat.switch_domain) CHECK(d == Domain::fixed_off);
    const auto designated = designated_sources(n, sc.bg, false);
    for (std::size_t b = 0; b < sc.bg.size(); ++b)
        if (designated[b]) CHECK(stat.inverter_domain[*designated[b]] == Domain::fixed_on);
    CHECK(stat.free_binaries() == 0);

    const OmcpInstance exp = inst(Controllability::expanding_microgrids);
    for (Domain d : exp.switch_domain) CHECK(d == Domain::free);
    for (std::size_t s = 0; s < n.sources().size(); ++s)
        CHECK(exp.inverter_domain[s] == stat.inverter_domain[s]);

    const OmcpInstance net = inst(Controllability::networking_microgrids);
    std::size_t free_inv = 0;
    for (Domain d : net.inverter_domain) free_inv += d == Domain::free;
    CHECK(free_inv >= 1);
    CHECK(net.free_binaries() == 6 + free_inv);
}

TEST_CASE("substation off keeps the block and drops the feed") {
    const Scenario sc = fixtures::ieee13(true);
    const OmcpInstance inst = fixtures::instance(sc, Objective::load_only, Controllability::networking_microgrids,
                                                 1.0, InstanceOptions{true, true});
    CHECK(inst.bg.size() == 6);
    CHECK(inst.inverter_domain[*sc.net->substation_source()] == Domain::fixed_off);
}

TEST_CASE("thresholds outside the unit interval are rejected") {
    const Scenario sc = fixtures::ieee13();
    for (double t : {-0.01, 1.01, std::nan("")})
        CHECK_THROWS_AS(fixtures::instance(sc, Objective::load_only, Controllability::networking_microgrids, t),
                        std::invalid_argument);
    CHECK_NOTHROW(fixtures::instance(sc, Objective::load_only, Controllability::networking_microgrids, 0.0));
    CHECK_NOTHROW(fixtures::instance(sc, Objective::load_only, Controllability::networking_microgrids, 1.0));
}

TEST_CASE("scaling the risk table leaves the solution unchanged") {
    const Scenario base = fixtures::ieee13();
    RiskTable rt = load_risk_csv(fixtures::data("ieee13_risk.csv"));
    for (auto& [id, v] : rt.values) v *= 0.5;  // a power of two, so fractions are bit-identical
    const Scenario half =
        make_scenario(parse_network(fixtures::data("ieee13.json")), rt, load_svi_csv(fixtures::data("ieee13_svi.csv")));
    for (double t : {0.2, 0.5, 0.8}) {
        CAPTURE(t);
        const auto a = solve(fixtures::instance(base, Objective::vulnerability_weighted,
                                                Controllability::networking_microgrids, t));
        const auto b = solve(fixtures::instance(half, Objective::vulnerability_weighted,
                                                Controllability::networking_microgrids, t));
        CHECK(a.best.block_energized == b.best.block_energized);
        CHECK(a.best.switch_closed == b.best.switch_closed);
        CHECK(a.best.risk_fraction == b.best.risk_fraction);
    }
}
